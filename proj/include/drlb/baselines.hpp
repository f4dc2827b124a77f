#pragma once

#include <memory>

#include "drlb/auction.hpp"
#include "drlb/oracle.hpp"

namespace drlb {

struct BaselineConfig {
  double lambda0 = 1.0;
  double delta_min = 0.1;  // pacing factor clamp
  double delta_max = 10.0;
};

enum class BaselineStrategy { kFlb, kBslb };

// Fixed linear bidding: value / lambda0.
double flb_bid(double value, const BaselineConfig& cfg);

// Budget-smoothed linear bidding: value / (lambda0 * delta) with
// delta = time_left/budget_left clamped to the configured bounds. A spent
// budget pins delta to the maximum, so the bid stays finite.
double bslb_bid(double value, double time_left_ratio, double budget_left_ratio,
                const BaselineConfig& cfg);

// Runs one episode slot by slot through the auction environment with the
// strategy's bid rule. r_over_rstar is filled from `oracle` when provided,
// otherwise computed from (data, budget).
EpisodeReport run_baseline_episode(BaselineStrategy strategy,
                                   std::shared_ptr<const EpisodeData> data,
                                   double budget, const BaselineConfig& cfg,
                                   const OracleResult* oracle = nullptr);

}  // namespace drlb
