#pragma once

#include <array>
#include <string>
#include <vector>

#include "drlb/auction.hpp"

namespace drlb {

// Hindsight-optimal scaling factor and the value it attains. Replaying the
// episode with constant lambda = lambda_star under the strict win rule
// reproduces exactly the greedy winning set, so total value == r_star.
struct OracleResult {
  double lambda_star = 0.0;
  double r_star = 0.0;
  double spend = 0.0;
};

// Density-greedy knapsack over the full episode: impressions sorted by
// value/market_price descending (ties: cheaper first, then input order) are
// taken until the next one no longer fits the budget. lambda_star is the
// density of that first excluded item, so exactly the taken prefix wins under
// bid = v / lambda_star. When everything fits, lambda_star sits just below
// the smallest taken density. Zero-price impressions with positive value are
// free and always included; zero-value impressions can never be won by a
// linear bid and are ignored.
OracleResult optimal_lambda_greedy(const std::vector<Impression>& impressions,
                                   double budget);

// Exact 0/1 knapsack maximum by subset enumeration; test oracle for the
// greedy approximation. Throws std::length_error above 22 items.
double brute_force_value(const std::vector<Impression>& impressions, double budget);

double r_over_rstar(double r, double r_star);

// One of the nine lambda-deviation bins; deviation = (lambda0 - l*) / l*.
struct DeviationGroup {
  double lower = 0.0;
  double upper = 0.0;

  bool operator==(const DeviationGroup&) const = default;
};

inline constexpr int kNumDeviationGroups = 9;

const std::array<DeviationGroup, kNumDeviationGroups>& deviation_groups();

DeviationGroup deviation_group(double lambda0, double lambda_star);
int deviation_group_index(double lambda0, double lambda_star);

// "[−100%,−80%)" style label for reports.
std::string deviation_group_label(const DeviationGroup& g);

}  // namespace drlb
