// Command-line front end: generate synthetic impression logs, compute
// hindsight oracles, train and evaluate bidders, derive plot data.
//
// Exit codes: 0 success, 1 validation error (CLI usage, config or file
// format), 2 runtime failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "drlb/agent.hpp"
#include "drlb/config.hpp"
#include "drlb/experiment.hpp"
#include "drlb/logio.hpp"
#include "drlb/numio.hpp"
#include "drlb/synth.hpp"

namespace {

int cmd_generate(const std::string& spec_path, std::uint64_t seed,
                 const std::string& out_path) {
  const auto cfg = drlb::load_config_file(spec_path);
  auto spec = cfg.synthesis;
  const auto episodes = drlb::generate_synthetic(spec, seed);
  drlb::write_log_file(out_path, episodes);
  std::cout << "wrote " << episodes.size() << " episodes to " << out_path << "\n";
  return 0;
}

int cmd_oracle(const std::string& data_path, double budget_ratio, int T) {
  const auto episodes = drlb::load_log_file(data_path, T);
  std::cout << "episode_id,impressions,total_cost,budget,lambda_star,r_star,spend\n";
  for (const auto& ep : episodes) {
    const double cost = ep.total_market_cost();
    if (cost <= 0.0) continue;
    const double budget = budget_ratio * cost;
    const auto oracle = drlb::optimal_lambda_greedy(ep.impressions, budget);
    std::cout << ep.episode_id << ',' << ep.impressions.size() << ','
              << drlb::dtos(cost) << ',' << drlb::dtos(budget) << ','
              << drlb::dtos(oracle.lambda_star) << ',' << drlb::dtos(oracle.r_star)
              << ',' << drlb::dtos(oracle.spend) << '\n';
  }
  return 0;
}

int cmd_train(const std::string& config_path, const std::string& out_dir) {
  const auto cfg = drlb::load_config_file(config_path);
  drlb::run_experiment(cfg, out_dir);
  std::cout << "run artifacts written to " << out_dir << "\n";
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path,
             const std::string& out_dir, const std::string& config_path,
             double budget_ratio, const std::string& lambda0_spec,
             std::uint64_t seed) {
  drlb::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = drlb::load_config_file(config_path);
  cfg.source = drlb::DataSource::kCsv;
  cfg.path = data_path;
  cfg.method = drlb::Method::kDrlb;
  cfg.train_fraction = 1.0;  // evaluate the whole file
  if (budget_ratio > 0.0) cfg.budget_ratio = budget_ratio;
  if (!lambda0_spec.empty()) {
    const std::string text = "[experiment]\nlambda0_eval = " + lambda0_spec + "\n";
    cfg.lambda0_eval = drlb::parse_config(text).lambda0_eval;
  }

  std::ifstream model_in(model_path, std::ios::binary);
  if (!model_in) throw std::runtime_error("cannot open " + model_path);
  const auto q_net = drlb::MlpNetwork::load(model_in);

  const auto prep = drlb::prepare_experiment(cfg);
  const drlb::ActionSpace actions;
  if (q_net.output_size() != actions.size() || q_net.input_size() != drlb::kStateDim)
    throw std::runtime_error("model shape does not match the 7-feature/7-action agent");

  std::filesystem::create_directories(out_dir);
  drlb::Rng seeder(seed + 0x517cc1b727220a95ull);
  const auto rows = drlb::evaluate_drlb(q_net, prep.eval, cfg.lambda0_eval, actions,
                                        prep.resolved.norms, seeder.fork_seed());
  std::ofstream log(std::filesystem::path(out_dir) / "eval_log.csv", std::ios::binary);
  log << "episode,steps,total_reward,total_cost,r_over_rstar,epsilon_end,loss_mean\n";
  for (const auto& row : rows)
    log << row.episode << ',' << row.report.steps << ','
        << drlb::dtos(row.report.total_reward) << ','
        << drlb::dtos(row.report.total_cost) << ','
        << drlb::dtos(row.report.r_over_rstar) << ",0,0\n";
  std::ofstream summary(std::filesystem::path(out_dir) / "summary.csv",
                        std::ios::binary);
  summary << drlb::summary_csv(rows);
  std::cout << "evaluated " << rows.size() << " episodes into " << out_dir << "\n";
  return 0;
}

int cmd_report(const std::string& run_dir) {
  drlb::emit_plot_data(run_dir);
  std::cout << "plot data written to " << run_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budget-constrained real-time bidding lab"};
  app.require_subcommand(1);

  std::string spec_path, out_path, data_path, config_path, out_dir, model_path,
      run_dir, lambda0_spec;
  std::uint64_t seed = 1;
  double budget_ratio = 0.0;
  int T = 96;

  auto* generate = app.add_subcommand("generate", "Generate a synthetic impression log");
  generate->add_option("--spec", spec_path, "Config file with the [data] synthesis spec")
      ->required();
  generate->add_option("--seed", seed, "Generator seed")->required();
  generate->add_option("--out", out_path, "Output CSV path")->required();

  auto* oracle = app.add_subcommand("oracle", "Hindsight lambda*/R* per episode");
  oracle->add_option("--data", data_path, "Impression log CSV")->required();
  oracle->add_option("--budget-ratio", budget_ratio, "Budget as a fraction of episode cost")
      ->required();
  oracle->add_option("--T", T, "Slots per episode");

  auto* train = app.add_subcommand("train", "Run the configured experiment");
  train->add_option("--config", config_path, "Experiment config file")->required();
  train->add_option("--out-dir", out_dir, "Output directory")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  eval->add_option("--model", model_path, "Q-network checkpoint")->required();
  eval->add_option("--data", data_path, "Impression log CSV")->required();
  eval->add_option("--out-dir", out_dir, "Output directory")->required();
  eval->add_option("--config", config_path, "Optional config for norms/budget/T");
  eval->add_option("--budget-ratio", budget_ratio, "Override budget ratio");
  eval->add_option("--lambda0", lambda0_spec,
                   "Lambda0 policy, e.g. 'oracle' or 'oracle_deviation -0.8'");
  eval->add_option("--seed", seed, "Seed for stochastic lambda0 policies");

  auto* report = app.add_subcommand("report", "Derive plot CSVs from a run directory");
  report->add_option("--run-dir", run_dir, "Per-seed run directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (generate->parsed()) return cmd_generate(spec_path, seed, out_path);
    if (oracle->parsed()) return cmd_oracle(data_path, budget_ratio, T);
    if (train->parsed()) return cmd_train(config_path, out_dir);
    if (eval->parsed())
      return cmd_eval(model_path, data_path, out_dir, config_path, budget_ratio,
                      lambda0_spec, seed);
    if (report->parsed()) return cmd_report(run_dir);
  } catch (const drlb::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const drlb::LogFormatError& e) {
    std::cerr << "log format error: " << e.what() << "\n";
    return 1;
  } catch (const drlb::CheckpointError& e) {
    std::cerr << "checkpoint format error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
