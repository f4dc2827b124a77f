#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <vector>

#include "drlb/auction.hpp"
#include "drlb/bidding.hpp"
#include "drlb/mlp.hpp"
#include "drlb/oracle.hpp"
#include "drlb/rewardnet.hpp"
#include "drlb/rng.hpp"

namespace drlb {

struct Transition {
  StateVector state;
  int action = 0;
  StateVector next_state;
  bool next_terminal = false;
  double reward = 0.0;
};

// Bounded FIFO of transitions with a seeded uniform sampler (with
// replacement). Oldest entries are evicted first.
class ReplayMemory {
 public:
  ReplayMemory(std::size_t capacity, std::uint64_t seed);

  void push(Transition t);
  std::vector<Transition> sample(int batch_size);

  std::size_t size() const { return buf_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::deque<Transition>& buffer() const { return buf_; }

 private:
  std::size_t capacity_;
  std::deque<Transition> buf_;
  Rng rng_;
};

struct AgentConfig {
  double gamma = 1.0;
  double epsilon_floor = 0.05;
  double epsilon_cap = 0.95;
  double adaptive_epsilon_min = 0.5;  // forced exploration when Q looks abnormal
  double anneal_rate = 1e-4;          // r_epsilon
  bool adaptive = true;
  int target_sync_period = 100;  // C
  std::size_t replay_capacity = 100000;  // N1
  int episodes = 0;                      // K
};

// max(cap - r_epsilon * t, floor), annealed over global training steps.
double epsilon_at(long long t, const AgentConfig& cfg);

// Non-decreasing up to a single peak, then non-increasing; plateaus and
// monotone sequences count.
bool is_unimodal(const std::vector<double>& q_values);

struct ActionChoice {
  int action = 0;
  double epsilon_used = 0.0;
};

// Epsilon-greedy over q_values (ordered by ascending adjustment rate). When
// the profile is not unimodal and adaptation is on, exploration is raised to
// at least adaptive_epsilon_min. Greedy ties resolve to the lowest index.
ActionChoice select_action(const std::vector<double>& q_values, double epsilon,
                           const AgentConfig& cfg, Rng& rng);

// y = r for terminal transitions, else r + gamma * max_a' Q_target(s', a').
std::vector<double> td_targets(const std::vector<Transition>& batch,
                               const MlpNetwork& target_net, double gamma);

// How the initial lambda of an episode is chosen.
struct Lambda0Policy {
  enum class Kind {
    kFixed,                 // constant value
    kOracle,                // this episode's lambda*
    kOraclePrev,            // previous episode's lambda*
    kOracleDeviation,       // lambda* * (1 + deviation)
    kOracleDeviationRange,  // previous lambda* * (1 + U(lo, hi))
  };
  Kind kind = Kind::kOracle;
  double value = 1.0;
  double deviation = 0.0;
  double dev_lo = 0.0;
  double dev_hi = 0.0;

  double pick(double lambda_star_cur, double lambda_star_prev, Rng& rng) const;
};

enum class RewardMode { kRewardNet, kImmediate };

struct TrainerConfig {
  AgentConfig agent;
  TrainConfig net;
  RewardNetConfig reward_net;
  StateNorms norms;
  ActionSpace actions;
  RewardMode reward_mode = RewardMode::kRewardNet;
  std::vector<int> hidden = {100, 100, 100};
  double reward_scale = 1.0;  // immediate rewards are divided by this
  Lambda0Policy lambda0;
  std::uint64_t seed = 1;
};

// One episode with its budget and precomputed hindsight oracle.
struct EpisodeSetup {
  std::shared_ptr<const EpisodeData> data;
  double budget = 0.0;
  OracleResult oracle;
};

struct EpisodeLogRow {
  int episode = 0;
  int steps = 0;
  double total_reward = 0.0;
  double total_cost = 0.0;
  double r_over_rstar = 0.0;
  double epsilon_end = 0.0;
  double loss_mean = 0.0;
};

// The training loop: one regulation step per slot -- observe state, pick an
// action, adjust lambda, settle the slot, fetch the shaped reward, store the
// transition, one descent step on a sampled mini-batch, periodic target
// sync. Episode ends hand the visited pairs to the reward store. The whole
// run is a deterministic function of (episodes, config, seed).
class DrlbTrainer {
 public:
  DrlbTrainer(std::vector<EpisodeSetup> episodes, TrainerConfig cfg);

  EpisodeLogRow run_episode();
  std::vector<EpisodeLogRow> run(int num_episodes);

  const MlpNetwork& q_net() const { return q_net_; }
  const MlpNetwork& target_net() const { return target_net_; }
  const MlpNetwork& reward_net() const { return reward_net_; }
  const RewardStore& store() const { return store_; }
  const RewardNetReplay& d2() const { return d2_; }
  const ReplayMemory& replay() const { return replay_; }
  long long global_step() const { return global_step_; }
  int episodes_run() const { return episode_index_; }
  const TrainerConfig& config() const { return cfg_; }

 private:
  std::vector<EpisodeSetup> episodes_;
  TrainerConfig cfg_;
  MlpNetwork q_net_;
  MlpNetwork target_net_;
  MlpNetwork reward_net_;
  ReplayMemory replay_;
  RewardNetReplay d2_;
  RewardStore store_;
  Rng action_rng_;
  Rng d2_rng_;
  Rng lambda0_rng_;
  long long global_step_ = 0;
  int episode_index_ = 0;
  double lambda_star_prev_ = 0.0;
};

// Greedy (epsilon = 0, no adaptive boost) episode rollout of a Q-network.
EpisodeReport run_greedy_episode(const MlpNetwork& q_net,
                                 std::shared_ptr<const EpisodeData> data,
                                 double budget, const OracleResult& oracle,
                                 double lambda0, const ActionSpace& actions,
                                 const StateNorms& norms);

}  // namespace drlb
