#include "drlb/agent.hpp"

#include <algorithm>
#include <stdexcept>

namespace drlb {

ReplayMemory::ReplayMemory(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(seed) {
  if (capacity_ == 0) throw std::invalid_argument("capacity must be >= 1");
}

void ReplayMemory::push(Transition t) {
  buf_.push_back(std::move(t));
  if (buf_.size() > capacity_) buf_.pop_front();
}

std::vector<Transition> ReplayMemory::sample(int batch_size) {
  if (buf_.empty()) throw std::logic_error("sampling from empty replay memory");
  if (batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  std::vector<Transition> out;
  out.reserve(static_cast<std::size_t>(batch_size));
  for (int j = 0; j < batch_size; ++j)
    out.push_back(buf_[static_cast<std::size_t>(rng_.uniform_int(static_cast<int>(buf_.size())))]);
  return out;
}

double epsilon_at(long long t, const AgentConfig& cfg) {
  if (t < 0) throw std::invalid_argument("step must be >= 0");
  return std::max(cfg.epsilon_cap - cfg.anneal_rate * static_cast<double>(t),
                  cfg.epsilon_floor);
}

bool is_unimodal(const std::vector<double>& q_values) {
  if (q_values.empty()) throw std::invalid_argument("empty q-value list");
  std::size_t i = 0;
  while (i + 1 < q_values.size() && q_values[i + 1] >= q_values[i]) ++i;
  while (i + 1 < q_values.size() && q_values[i + 1] <= q_values[i]) ++i;
  return i + 1 == q_values.size();
}

ActionChoice select_action(const std::vector<double>& q_values, double epsilon,
                           const AgentConfig& cfg, Rng& rng) {
  if (epsilon < 0.0 || epsilon > 1.0)
    throw std::invalid_argument("epsilon must be in [0, 1]");
  double used = epsilon;
  if (cfg.adaptive && !is_unimodal(q_values))
    used = std::max(epsilon, cfg.adaptive_epsilon_min);
  if (rng.bernoulli(used))
    return {rng.uniform_int(static_cast<int>(q_values.size())), used};
  int best = 0;
  for (std::size_t i = 1; i < q_values.size(); ++i)
    if (q_values[i] > q_values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return {best, used};
}

std::vector<double> td_targets(const std::vector<Transition>& batch,
                               const MlpNetwork& target_net, double gamma) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  std::vector<double> ys;
  ys.reserve(batch.size());
  for (const auto& tr : batch) {
    if (tr.next_terminal) {
      ys.push_back(tr.reward);
    } else {
      const auto q = target_net.forward(tr.next_state.as_vector());
      ys.push_back(tr.reward + gamma * *std::max_element(q.begin(), q.end()));
    }
  }
  return ys;
}

double Lambda0Policy::pick(double lambda_star_cur, double lambda_star_prev,
                           Rng& rng) const {
  switch (kind) {
    case Kind::kFixed:
      return value;
    case Kind::kOracle:
      return lambda_star_cur;
    case Kind::kOraclePrev:
      return lambda_star_prev;
    case Kind::kOracleDeviation:
      return lambda_star_cur * (1.0 + deviation);
    case Kind::kOracleDeviationRange:
      return lambda_star_prev * (1.0 + rng.uniform(dev_lo, dev_hi));
  }
  throw std::logic_error("unreachable");
}

DrlbTrainer::DrlbTrainer(std::vector<EpisodeSetup> episodes, TrainerConfig cfg)
    : episodes_(std::move(episodes)),
      cfg_(std::move(cfg)),
      replay_(cfg_.agent.replay_capacity, 0),
      d2_(cfg_.reward_net.d2_capacity),
      store_(cfg_.reward_net.store_capacity, cfg_.reward_net.lrfu_decay),
      action_rng_(0),
      d2_rng_(0),
      lambda0_rng_(0) {
  if (episodes_.empty()) throw std::invalid_argument("no training episodes");
  for (const auto& ep : episodes_) {
    if (!ep.data) throw std::invalid_argument("null episode data");
    if (!(ep.budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  }
  Rng master(cfg_.seed);
  std::vector<int> sizes;
  sizes.push_back(kStateDim);
  for (int h : cfg_.hidden) sizes.push_back(h);
  sizes.push_back(cfg_.actions.size());
  q_net_ = MlpNetwork(sizes, master.fork_seed());
  target_net_ = q_net_;
  reward_net_ = MlpNetwork(sizes, master.fork_seed());
  replay_ = ReplayMemory(cfg_.agent.replay_capacity, master.fork_seed());
  action_rng_ = Rng(master.fork_seed());
  d2_rng_ = Rng(master.fork_seed());
  lambda0_rng_ = Rng(master.fork_seed());
  lambda_star_prev_ = episodes_.front().oracle.lambda_star;
}

EpisodeLogRow DrlbTrainer::run_episode() {
  const auto& ep = episodes_[static_cast<std::size_t>(episode_index_) % episodes_.size()];
  const int T = ep.data->T;
  const double lambda0 =
      cfg_.lambda0.pick(ep.oracle.lambda_star, lambda_star_prev_, lambda0_rng_);

  AuctionEnv env(ep.data);
  env.reset(ep.budget, lambda0);
  StateVector state = initial_state(T);
  EpisodeRecord record;
  double lambda = lambda0;
  double loss_sum = 0.0;
  int loss_count = 0;
  double epsilon_end = epsilon_at(global_step_, cfg_.agent);
  int steps = 0;

  while (!env.is_terminal()) {
    train_rewardnet_step(reward_net_, d2_, cfg_.net, d2_rng_);

    const double epsilon = epsilon_at(global_step_, cfg_.agent);
    epsilon_end = epsilon;
    const auto q_values = q_net_.forward(state.as_vector());
    const auto choice = select_action(q_values, epsilon, cfg_.agent, action_rng_);
    lambda = apply_action(lambda, choice.action, cfg_.actions);

    const EnvState before = env.state();
    const StepOutcome outcome = env.step(lambda);
    const StateVector next_state = build_state(before, outcome, T, cfg_.norms);
    const bool terminal = env.is_terminal();

    const double immediate = outcome.reward / cfg_.reward_scale;
    const double shaped =
        cfg_.reward_mode == RewardMode::kRewardNet
            ? predict_reward(reward_net_, state, choice.action) / T
            : immediate;

    replay_.push(Transition{state, choice.action, next_state, terminal, shaped});
    record.add(state, choice.action, immediate);

    if (replay_.size() >= static_cast<std::size_t>(cfg_.net.batch_size)) {
      const auto batch = replay_.sample(cfg_.net.batch_size);
      const auto ys = td_targets(batch, target_net_, cfg_.agent.gamma);
      std::vector<std::vector<double>> inputs;
      std::vector<int> indices;
      inputs.reserve(batch.size());
      indices.reserve(batch.size());
      for (const auto& tr : batch) {
        inputs.push_back(tr.state.as_vector());
        indices.push_back(tr.action);
      }
      loss_sum += q_net_.sgd_step(inputs, ys, indices, cfg_.net);
      ++loss_count;
    }

    ++global_step_;
    if (global_step_ % cfg_.agent.target_sync_period == 0) target_net_ = q_net_;
    state = next_state;
    ++steps;
  }

  finalize_episode(store_, record, d2_, episode_index_, cfg_.reward_net.key_grid);
  lambda_star_prev_ = ep.oracle.lambda_star;

  EpisodeLogRow row;
  row.episode = episode_index_;
  row.steps = steps;
  row.total_reward = env.state().cumulative_value;
  row.total_cost = env.state().budget_total - env.state().budget_left;
  row.r_over_rstar = ep.oracle.r_star > 0.0
                         ? r_over_rstar(row.total_reward, ep.oracle.r_star)
                         : 0.0;
  row.epsilon_end = epsilon_end;
  row.loss_mean = loss_count > 0 ? loss_sum / loss_count : 0.0;
  ++episode_index_;
  return row;
}

std::vector<EpisodeLogRow> DrlbTrainer::run(int num_episodes) {
  std::vector<EpisodeLogRow> log;
  log.reserve(static_cast<std::size_t>(num_episodes));
  for (int i = 0; i < num_episodes; ++i) log.push_back(run_episode());
  return log;
}

EpisodeReport run_greedy_episode(const MlpNetwork& q_net,
                                 std::shared_ptr<const EpisodeData> data,
                                 double budget, const OracleResult& oracle,
                                 double lambda0, const ActionSpace& actions,
                                 const StateNorms& norms) {
  const int T = data->T;
  AuctionEnv env(std::move(data));
  env.reset(budget, lambda0);
  StateVector state = initial_state(T);
  double lambda = lambda0;
  EpisodeReport report;
  while (!env.is_terminal()) {
    const auto q = q_net.forward(state.as_vector());
    int best = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (q[i] > q[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
    lambda = apply_action(lambda, best, actions);
    const EnvState before = env.state();
    const StepOutcome out = env.step(lambda);
    state = build_state(before, out, T, norms);
    report.slot_rewards.push_back(out.reward);
    report.slot_costs.push_back(out.cost);
    report.total_reward += out.reward;
    report.total_cost += out.cost;
    report.wins += out.wins;
    report.auctions += out.auctions;
    ++report.steps;
  }
  report.r_over_rstar =
      oracle.r_star > 0.0 ? r_over_rstar(report.total_reward, oracle.r_star) : 0.0;
  return report;
}

}  // namespace drlb
