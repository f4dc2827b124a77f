#include "drlb/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace drlb {

double flb_bid(double value, const BaselineConfig& cfg) {
  if (!(cfg.lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be > 0");
  if (value < 0.0) throw std::invalid_argument("value must be >= 0");
  return value / cfg.lambda0;
}

double bslb_bid(double value, double time_left_ratio, double budget_left_ratio,
                const BaselineConfig& cfg) {
  if (!(cfg.lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be > 0");
  if (value < 0.0) throw std::invalid_argument("value must be >= 0");
  if (time_left_ratio < 0.0 || time_left_ratio > 1.0 || budget_left_ratio < 0.0 ||
      budget_left_ratio > 1.0)
    throw std::invalid_argument("ratios must be in [0, 1]");
  double delta;
  if (budget_left_ratio == 0.0) {
    delta = cfg.delta_max;
  } else {
    delta = std::clamp(time_left_ratio / budget_left_ratio, cfg.delta_min,
                       cfg.delta_max);
  }
  return value / (cfg.lambda0 * delta);
}

EpisodeReport run_baseline_episode(BaselineStrategy strategy,
                                   std::shared_ptr<const EpisodeData> data,
                                   double budget, const BaselineConfig& cfg,
                                   const OracleResult* oracle) {
  OracleResult local;
  if (oracle == nullptr) {
    local = optimal_lambda_greedy(data->impressions, budget);
    oracle = &local;
  }
  const int T = data->T;
  AuctionEnv env(std::move(data));
  env.reset(budget, cfg.lambda0);

  EpisodeReport report;
  while (!env.is_terminal()) {
    double lambda = cfg.lambda0;
    if (strategy == BaselineStrategy::kBslb) {
      const auto& st = env.state();
      const double time_left = static_cast<double>(T - st.t) / T;
      const double budget_left = st.budget_left / st.budget_total;
      // bid = v / (lambda0 * delta), i.e. an effective lambda of lambda0 * delta
      double delta = budget_left == 0.0
                         ? cfg.delta_max
                         : std::clamp(time_left / budget_left, cfg.delta_min,
                                      cfg.delta_max);
      lambda = cfg.lambda0 * delta;
    }
    const StepOutcome out = env.step(lambda);
    report.slot_rewards.push_back(out.reward);
    report.slot_costs.push_back(out.cost);
    report.total_reward += out.reward;
    report.total_cost += out.cost;
    report.wins += out.wins;
    report.auctions += out.auctions;
    ++report.steps;
  }
  report.r_over_rstar = oracle->r_star > 0.0
                            ? r_over_rstar(report.total_reward, oracle->r_star)
                            : 0.0;
  return report;
}

}  // namespace drlb
