#pragma once

#include <memory>
#include <string>
#include <vector>

#include "drlb/baselines.hpp"
#include "drlb/config.hpp"

namespace drlb {

// Data, budgets and oracles ready to run; `resolved` carries concrete values
// for every `auto` normalization constant.
struct PreparedExperiment {
  std::vector<EpisodeSetup> train;
  std::vector<EpisodeSetup> eval;
  ExperimentConfig resolved;
};

// Loads or synthesizes episodes, drops zero-cost ones, splits train/eval by
// train_fraction (first part trains) and resolves auto constants from the
// training split.
PreparedExperiment prepare_experiment(const ExperimentConfig& cfg);

struct EvalEpisodeRow {
  int episode = 0;  // 1-based position in the eval set
  std::string episode_id;
  double lambda0 = 0.0;
  double lambda_star = 0.0;
  double r_star = 0.0;
  double budget = 0.0;
  EpisodeReport report;
};

class MlpNetwork;

// Greedy rollout of a trained Q-network over the eval set; lambda0 picked by
// `policy` with the given rng seed (a fresh stream per pass keeps lambda0
// draws identical across checkpoint evaluations).
std::vector<EvalEpisodeRow> evaluate_drlb(const MlpNetwork& q_net,
                                          const std::vector<EpisodeSetup>& eval,
                                          const Lambda0Policy& policy,
                                          const ActionSpace& actions,
                                          const StateNorms& norms,
                                          std::uint64_t eval_seed);

std::vector<EvalEpisodeRow> evaluate_baseline(Method method,
                                              const std::vector<EpisodeSetup>& eval,
                                              const Lambda0Policy& policy,
                                              double delta_min, double delta_max,
                                              std::uint64_t eval_seed);

// Per-deviation-group mean R/R*: nine group rows plus an Average row.
std::string summary_csv(const std::vector<EvalEpisodeRow>& rows);

// Trains and/or evaluates every configured seed under out_dir/seed_<s>/ and
// writes the resolved config at the root. See README for the file inventory.
void run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

// Derives plot_convergence.csv and plot_reward_dist.csv from one seed's run
// directory. Throws std::runtime_error when the run artifacts are missing.
void emit_plot_data(const std::string& run_dir);

}  // namespace drlb
