#include "drlb/experiment.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "drlb/agent.hpp"
#include "drlb/logio.hpp"
#include "drlb/numio.hpp"
#include "drlb/synth.hpp"

namespace drlb {

namespace fs = std::filesystem;

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing run artifact: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::string episode_log_csv(const std::vector<EpisodeLogRow>& rows, int base) {
  std::ostringstream out;
  out << "episode,steps,total_reward,total_cost,r_over_rstar,epsilon_end,loss_mean\n";
  for (const auto& r : rows) {
    out << (r.episode + base) << ',' << r.steps << ',' << dtos(r.total_reward) << ','
        << dtos(r.total_cost) << ',' << dtos(r.r_over_rstar) << ','
        << dtos(r.epsilon_end) << ',' << dtos(r.loss_mean) << '\n';
  }
  return out.str();
}

std::string checkpoint_name(int episode) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "checkpoint_ep%05d.mlp", episode);
  return buf;
}

}  // namespace

PreparedExperiment prepare_experiment(const ExperimentConfig& cfg) {
  std::vector<EpisodeData> raw;
  if (cfg.source == DataSource::kSynthetic) {
    raw = generate_synthetic(cfg.synthesis, cfg.data_seed);
  } else {
    raw = load_log_file(cfg.path, cfg.synthesis.T);
  }

  std::vector<EpisodeSetup> all;
  for (auto& ep : raw) {
    const double cost = ep.total_market_cost();
    if (cost <= 0.0) continue;  // nothing biddable in this episode
    EpisodeSetup setup;
    setup.budget = cfg.budget_ratio * cost;
    auto shared = std::make_shared<EpisodeData>(std::move(ep));
    setup.oracle = optimal_lambda_greedy(shared->impressions, setup.budget);
    setup.data = std::move(shared);
    all.push_back(std::move(setup));
  }
  if (all.empty()) throw std::runtime_error("dataset has no biddable episodes");

  PreparedExperiment prep;
  prep.resolved = cfg;
  const auto n = all.size();
  auto n_train = static_cast<std::size_t>(
      std::floor(cfg.train_fraction * static_cast<double>(n) + 1e-9));
  n_train = std::min(std::max<std::size_t>(n_train, 1), n);
  prep.train.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n_train));
  if (n_train < n)
    prep.eval.assign(all.begin() + static_cast<std::ptrdiff_t>(n_train), all.end());
  else
    prep.eval = prep.train;  // degenerate split: evaluate in-sample

  // Resolve auto normalization constants from the training split.
  double price_sum = 0.0, value_sum = 0.0, rstar_sum = 0.0;
  long long impression_count = 0, slot_count = 0;
  for (const auto& ep : prep.train) {
    for (const auto& im : ep.data->impressions) {
      price_sum += im.market_price;
      value_sum += im.value;
      ++impression_count;
    }
    slot_count += ep.data->T;
    rstar_sum += ep.oracle.r_star;
  }
  auto& r = prep.resolved;
  if (r.ref_cpm_auto) {
    const double mean_price = impression_count > 0 ? price_sum / impression_count : 0.0;
    r.norms.ref_cpm = mean_price > 0.0 ? 1000.0 * mean_price : 1000.0;
    r.ref_cpm_auto = false;
  }
  if (r.ref_value_auto) {
    const double per_slot = slot_count > 0 ? value_sum / slot_count : 0.0;
    r.norms.ref_value = per_slot > 0.0 ? per_slot : 1.0;
    r.ref_value_auto = false;
  }
  if (r.reward_scale_auto) {
    const double mean_rstar = rstar_sum / static_cast<double>(prep.train.size());
    r.reward_scale = mean_rstar > 0.0 ? mean_rstar : 1.0;
    r.reward_scale_auto = false;
  }
  return prep;
}

std::vector<EvalEpisodeRow> evaluate_drlb(const MlpNetwork& q_net,
                                          const std::vector<EpisodeSetup>& eval,
                                          const Lambda0Policy& policy,
                                          const ActionSpace& actions,
                                          const StateNorms& norms,
                                          std::uint64_t eval_seed) {
  Rng rng(eval_seed);
  std::vector<EvalEpisodeRow> rows;
  double lambda_star_prev = eval.empty() ? 1.0 : eval.front().oracle.lambda_star;
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const auto& ep = eval[i];
    EvalEpisodeRow row;
    row.episode = static_cast<int>(i) + 1;
    row.episode_id = ep.data->episode_id;
    row.lambda0 = policy.pick(ep.oracle.lambda_star, lambda_star_prev, rng);
    row.lambda_star = ep.oracle.lambda_star;
    row.r_star = ep.oracle.r_star;
    row.budget = ep.budget;
    row.report = run_greedy_episode(q_net, ep.data, ep.budget, ep.oracle, row.lambda0,
                                    actions, norms);
    lambda_star_prev = ep.oracle.lambda_star;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<EvalEpisodeRow> evaluate_baseline(Method method,
                                              const std::vector<EpisodeSetup>& eval,
                                              const Lambda0Policy& policy,
                                              double delta_min, double delta_max,
                                              std::uint64_t eval_seed) {
  if (method == Method::kDrlb) throw std::invalid_argument("not a baseline method");
  Rng rng(eval_seed);
  std::vector<EvalEpisodeRow> rows;
  double lambda_star_prev = eval.empty() ? 1.0 : eval.front().oracle.lambda_star;
  for (std::size_t i = 0; i < eval.size(); ++i) {
    const auto& ep = eval[i];
    EvalEpisodeRow row;
    row.episode = static_cast<int>(i) + 1;
    row.episode_id = ep.data->episode_id;
    row.lambda0 = policy.pick(ep.oracle.lambda_star, lambda_star_prev, rng);
    row.lambda_star = ep.oracle.lambda_star;
    row.r_star = ep.oracle.r_star;
    row.budget = ep.budget;
    BaselineConfig bc;
    bc.lambda0 = row.lambda0;
    bc.delta_min = delta_min;
    bc.delta_max = delta_max;
    row.report = run_baseline_episode(method == Method::kFlb ? BaselineStrategy::kFlb
                                                             : BaselineStrategy::kBslb,
                                      ep.data, ep.budget, bc, &ep.oracle);
    lambda_star_prev = ep.oracle.lambda_star;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_csv(const std::vector<EvalEpisodeRow>& rows) {
  const auto& groups = deviation_groups();
  std::vector<int> counts(groups.size(), 0);
  std::vector<double> sums(groups.size(), 0.0);
  double total = 0.0;
  for (const auto& r : rows) {
    const int g = deviation_group_index(r.lambda0, r.lambda_star);
    ++counts[static_cast<std::size_t>(g)];
    sums[static_cast<std::size_t>(g)] += r.report.r_over_rstar;
    total += r.report.r_over_rstar;
  }
  std::ostringstream out;
  out << "group,lower,upper,count,mean_r_over_rstar\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    out << deviation_group_label(groups[g]) << ',' << dtos(groups[g].lower) << ','
        << (std::isinf(groups[g].upper) ? "inf" : dtos(groups[g].upper)) << ','
        << counts[g] << ',';
    if (counts[g] > 0) out << dtos(sums[g] / counts[g]);
    out << '\n';
  }
  out << "Average,,," << rows.size() << ',';
  if (!rows.empty()) out << dtos(total / static_cast<double>(rows.size()));
  out << '\n';
  return out.str();
}

namespace {

std::string eval_log_csv(const std::vector<EvalEpisodeRow>& rows) {
  std::ostringstream out;
  out << "episode,steps,total_reward,total_cost,r_over_rstar,epsilon_end,loss_mean\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << r.report.steps << ',' << dtos(r.report.total_reward)
        << ',' << dtos(r.report.total_cost) << ',' << dtos(r.report.r_over_rstar)
        << ",0,0\n";
  }
  return out.str();
}

std::string eval_detail_csv(const std::vector<EvalEpisodeRow>& rows) {
  std::ostringstream out;
  out << "episode,episode_id,lambda0,lambda_star,deviation,group_lower,group_upper,"
         "r_star,budget\n";
  for (const auto& r : rows) {
    const auto g = deviation_group(r.lambda0, r.lambda_star);
    const double dev = (r.lambda0 - r.lambda_star) / r.lambda_star;
    out << r.episode << ',' << r.episode_id << ',' << dtos(r.lambda0) << ','
        << dtos(r.lambda_star) << ',' << dtos(dev) << ',' << dtos(g.lower) << ','
        << (std::isinf(g.upper) ? "inf" : dtos(g.upper)) << ',' << dtos(r.r_star)
        << ',' << dtos(r.budget) << '\n';
  }
  return out.str();
}

void append_eval_steps(std::ostringstream& out, const std::string& series,
                       const std::vector<EvalEpisodeRow>& rows) {
  for (const auto& r : rows)
    for (std::size_t t = 0; t < r.report.slot_rewards.size(); ++t)
      out << series << ',' << r.episode << ',' << t << ','
          << dtos(r.report.slot_rewards[t]) << ',' << dtos(r.r_star) << '\n';
}

// The ideal per-slot reward distribution: replay with constant lambda*.
std::vector<EvalEpisodeRow> oracle_series(const std::vector<EvalEpisodeRow>& rows,
                                          const std::vector<EpisodeSetup>& eval) {
  std::vector<EvalEpisodeRow> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& ep = eval[i];
    EvalEpisodeRow row = rows[i];
    BaselineConfig bc;
    bc.lambda0 = ep.oracle.lambda_star;
    row.lambda0 = bc.lambda0;
    row.report = run_baseline_episode(BaselineStrategy::kFlb, ep.data, ep.budget, bc,
                                      &ep.oracle);
    out.push_back(std::move(row));
  }
  return out;
}

void write_eval_artifacts(const fs::path& dir, const std::string& series,
                          const std::vector<EvalEpisodeRow>& rows,
                          const std::vector<EpisodeSetup>& eval) {
  write_text_file(dir / "eval_log.csv", eval_log_csv(rows));
  write_text_file(dir / "eval_detail.csv", eval_detail_csv(rows));
  write_text_file(dir / "summary.csv", summary_csv(rows));
  std::ostringstream steps;
  steps << "series,episode,step,reward,r_star\n";
  append_eval_steps(steps, series, rows);
  append_eval_steps(steps, "oracle", oracle_series(rows, eval));
  write_text_file(dir / "eval_steps.csv", steps.str());
}

std::string store_dump_csv(const RewardStore& store) {
  std::ostringstream out;
  out << "key,best_return,lrfu_score\n";
  for (const auto& [key, entry] : store.snapshot()) {
    for (std::size_t i = 0; i < key.cells.size(); ++i) out << key.cells[i] << ':';
    out << key.action << ',' << dtos(entry.best_return) << ','
        << dtos(entry.lrfu_score) << '\n';
  }
  return out.str();
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto prep = prepare_experiment(cfg);
  const auto& r = prep.resolved;
  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / "resolved_config.ini", write_config(r));

  const ActionSpace actions;
  for (const std::uint64_t seed : r.seeds) {
    const fs::path dir = fs::path(out_dir) / ("seed_" + std::to_string(seed));
    fs::create_directories(dir);
    Rng seeder(seed + 0x517cc1b727220a95ull);
    const std::uint64_t eval_seed = seeder.fork_seed();

    if (r.method == Method::kDrlb) {
      TrainerConfig tc;
      tc.agent = r.agent;
      tc.agent.episodes = r.episodes_train;
      tc.net = r.net;
      tc.reward_net = r.reward_net;
      tc.norms = r.norms;
      tc.actions = actions;
      tc.reward_mode = r.reward_mode;
      tc.hidden = r.hidden;
      tc.reward_scale = r.reward_scale;
      tc.lambda0 = r.lambda0_train;
      tc.seed = seed;
      DrlbTrainer trainer(prep.train, tc);

      std::vector<EpisodeLogRow> train_log;
      std::ostringstream ck_log;
      ck_log << "checkpoint_episode,episode,r_over_rstar\n";
      for (int ep = 1; ep <= r.episodes_train; ++ep) {
        train_log.push_back(trainer.run_episode());
        if (ep % r.checkpoint_every == 0 || ep == r.episodes_train) {
          std::ofstream ck(dir / checkpoint_name(ep), std::ios::binary);
          trainer.q_net().save(ck);
          const auto rows = evaluate_drlb(trainer.q_net(), prep.eval, r.lambda0_eval,
                                          actions, r.norms, eval_seed);
          for (const auto& row : rows)
            ck_log << ep << ',' << row.episode << ',' << dtos(row.report.r_over_rstar)
                   << '\n';
        }
      }
      write_text_file(dir / "train_log.csv", episode_log_csv(train_log, 1));
      write_text_file(dir / "checkpoint_eval_log.csv", ck_log.str());
      {
        std::ofstream f(dir / "model_final.mlp", std::ios::binary);
        trainer.q_net().save(f);
        std::ofstream g(dir / "rewardnet_final.mlp", std::ios::binary);
        trainer.reward_net().save(g);
      }
      if (r.dump_store)
        write_text_file(dir / "rewardstore.csv", store_dump_csv(trainer.store()));
      const auto rows = evaluate_drlb(trainer.q_net(), prep.eval, r.lambda0_eval,
                                      actions, r.norms, eval_seed);
      write_eval_artifacts(dir, to_string(r.method), rows, prep.eval);
    } else {
      const auto rows = evaluate_baseline(r.method, prep.eval, r.lambda0_eval,
                                          r.delta_min, r.delta_max, eval_seed);
      write_eval_artifacts(dir, to_string(r.method), rows, prep.eval);
    }
  }
}

void emit_plot_data(const std::string& run_dir) {
  const fs::path dir(run_dir);
  if (!fs::exists(dir / "eval_steps.csv"))
    throw std::runtime_error("missing run artifact: " + (dir / "eval_steps.csv").string());

  // Reward distribution: mean r_t / R* per (series, step) over eval episodes.
  const auto step_lines = read_lines(dir / "eval_steps.csv");
  if (step_lines.empty() || step_lines[0] != "series,episode,step,reward,r_star")
    throw std::runtime_error("unexpected eval_steps.csv header");
  std::map<std::string, std::map<long long, double>> sums;  // series -> step -> sum
  std::map<std::string, std::map<long long, bool>> seen_episode;
  std::map<std::string, long long> episode_count;
  for (std::size_t i = 1; i < step_lines.size(); ++i) {
    const auto f = split(step_lines[i], ',');
    if (f.size() != 5) throw std::runtime_error("bad eval_steps.csv row");
    const std::string series(f[0]);
    const auto episode = parse_int(f[1]);
    const auto step = parse_int(f[2]);
    const auto reward = parse_double(f[3]);
    const auto r_star = parse_double(f[4]);
    if (!episode || !step || !reward || !r_star || *r_star <= 0.0)
      throw std::runtime_error("bad eval_steps.csv row");
    sums[series][*step] += *reward / *r_star;
    if (!seen_episode[series][*episode]) {
      seen_episode[series][*episode] = true;
      ++episode_count[series];
    }
  }
  std::ostringstream dist;
  dist << "step,r_t_over_rstar,series\n";
  for (const auto& [series, per_step] : sums) {
    const double n = static_cast<double>(episode_count[series]);
    for (const auto& [step, sum] : per_step)
      dist << step << ',' << dtos(sum / n) << ',' << series << '\n';
  }
  write_text_file(dir / "plot_reward_dist.csv", dist.str());

  // Convergence: mean R/R* per checkpoint (training runs only).
  if (fs::exists(dir / "checkpoint_eval_log.csv")) {
    const auto ck_lines = read_lines(dir / "checkpoint_eval_log.csv");
    if (ck_lines.empty() || ck_lines[0] != "checkpoint_episode,episode,r_over_rstar")
      throw std::runtime_error("unexpected checkpoint_eval_log.csv header");
    std::map<long long, std::pair<double, long long>> acc;  // ckpt -> (sum, n)
    for (std::size_t i = 1; i < ck_lines.size(); ++i) {
      const auto f = split(ck_lines[i], ',');
      if (f.size() != 3) throw std::runtime_error("bad checkpoint_eval_log.csv row");
      const auto ck = parse_int(f[0]);
      const auto rr = parse_double(f[2]);
      if (!ck || !rr) throw std::runtime_error("bad checkpoint_eval_log.csv row");
      acc[*ck].first += *rr;
      acc[*ck].second += 1;
    }
    std::ostringstream conv;
    conv << "checkpoint_episode,r_over_rstar\n";
    for (const auto& [ck, pair] : acc)
      conv << ck << ',' << dtos(pair.first / static_cast<double>(pair.second)) << '\n';
    write_text_file(dir / "plot_convergence.csv", conv.str());
  }
}

}  // namespace drlb
