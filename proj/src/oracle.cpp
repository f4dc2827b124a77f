#include "drlb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace drlb {

OracleResult optimal_lambda_greedy(const std::vector<Impression>& impressions,
                                   double budget) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  if (impressions.empty()) throw std::invalid_argument("no impressions");
  bool any_nontrivial = false;
  for (const auto& im : impressions)
    if (im.value > 0.0 || im.market_price > 0.0) any_nontrivial = true;
  if (!any_nontrivial)
    throw std::invalid_argument("all impressions have zero value and price");

  OracleResult res;
  std::vector<bool> included(impressions.size(), false);

  // Free value first, then candidates ranked by density.
  std::vector<std::size_t> order;
  order.reserve(impressions.size());
  for (std::size_t i = 0; i < impressions.size(); ++i) {
    const auto& im = impressions[i];
    if (im.value <= 0.0) continue;
    if (im.market_price == 0.0) {
      included[i] = true;
    } else {
      order.push_back(i);
    }
  }
  auto density = [&](std::size_t i) {
    return impressions[i].value / impressions[i].market_price;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double da = density(a), db = density(b);
    if (da != db) return da > db;
    if (impressions[a].market_price != impressions[b].market_price)
      return impressions[a].market_price < impressions[b].market_price;
    return a < b;
  });

  double min_taken_density = std::numeric_limits<double>::infinity();
  bool has_marginal = false;
  double marginal_density = 0.0;
  for (std::size_t i : order) {
    const auto& im = impressions[i];
    if (res.spend + im.market_price <= budget) {
      res.spend += im.market_price;
      included[i] = true;
      min_taken_density = std::min(min_taken_density, density(i));
    } else {
      has_marginal = true;
      marginal_density = density(i);
      break;
    }
  }

  // Sum the winning values in arrival order with per-slot subtotals, exactly
  // as the environment accumulates them, so a lambda* replay reproduces
  // r_star bit for bit.
  double slot_sum = 0.0;
  for (std::size_t i = 0; i < impressions.size(); ++i) {
    if (i > 0 && impressions[i].slot != impressions[i - 1].slot) {
      res.r_star += slot_sum;
      slot_sum = 0.0;
    }
    if (included[i]) slot_sum += impressions[i].value;
  }
  res.r_star += slot_sum;

  if (has_marginal) {
    res.lambda_star = marginal_density;
  } else if (std::isfinite(min_taken_density)) {
    res.lambda_star = min_taken_density * (1.0 - 1e-9);
  } else {
    // Only free (or no) positive-value items; any positive lambda wins them.
    res.lambda_star = 1.0;
  }
  return res;
}

double brute_force_value(const std::vector<Impression>& impressions, double budget) {
  const std::size_t n = impressions.size();
  if (n > 22) throw std::length_error("brute force limited to 22 impressions");
  double best = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double cost = 0.0, value = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        cost += impressions[i].market_price;
        value += impressions[i].value;
      }
    }
    if (cost <= budget && value > best) best = value;
  }
  return best;
}

double r_over_rstar(double r, double r_star) {
  if (!(r_star > 0.0)) throw std::invalid_argument("r_star must be > 0");
  return r / r_star;
}

const std::array<DeviationGroup, kNumDeviationGroups>& deviation_groups() {
  static const std::array<DeviationGroup, kNumDeviationGroups> kGroups = {{
      {-1.0, -0.8},
      {-0.8, -0.4},
      {-0.4, -0.2},
      {-0.2, 0.0},
      {0.0, 0.2},
      {0.2, 0.4},
      {0.4, 0.8},
      {0.8, 1.6},
      {1.6, std::numeric_limits<double>::infinity()},
  }};
  return kGroups;
}

int deviation_group_index(double lambda0, double lambda_star) {
  if (!(lambda_star > 0.0)) throw std::invalid_argument("lambda_star must be > 0");
  const double dev = (lambda0 - lambda_star) / lambda_star;
  const auto& groups = deviation_groups();
  for (int i = 0; i < kNumDeviationGroups - 1; ++i) {
    if (dev < groups[static_cast<std::size_t>(i)].upper) return i;
  }
  return kNumDeviationGroups - 1;
}

DeviationGroup deviation_group(double lambda0, double lambda_star) {
  return deviation_groups()[static_cast<std::size_t>(
      deviation_group_index(lambda0, lambda_star))];
}

std::string deviation_group_label(const DeviationGroup& g) {
  auto pct = [](double x) {
    if (std::isinf(x)) return std::string("inf");
    return std::to_string(static_cast<long long>(std::llround(x * 100.0))) + "%";
  };
  return "[" + pct(g.lower) + "," + pct(g.upper) + ")";
}

}  // namespace drlb
