#pragma once

#include <array>
#include <vector>

#include "drlb/auction.hpp"

namespace drlb {

// Discrete lambda adjustment rates, ordered ascending. Every rate must stay
// above -1 so lambda remains strictly positive under any action sequence.
struct ActionSpace {
  std::vector<double> rates;

  ActionSpace() : rates{-0.08, -0.03, -0.01, 0.0, 0.01, 0.03, 0.08} {}
  explicit ActionSpace(std::vector<double> r);

  int size() const { return static_cast<int>(rates.size()); }
};

// The 7-feature agent observation, in fixed order.
struct StateVector {
  double t_norm = 0.0;            // t / T
  double budget_left_norm = 0.0;  // B_t / B
  double rol_norm = 0.0;          // (T - t) / T, regulation opportunities left
  double bcr = 0.0;               // (B_t - B_{t-1}) / B_{t-1}
  double cpm_norm = 0.0;          // slot CPM / ref_cpm
  double win_rate = 0.0;
  double last_reward_norm = 0.0;  // slot reward / ref_value

  std::array<double, 7> as_array() const {
    return {t_norm, budget_left_norm, rol_norm, bcr,
            cpm_norm, win_rate, last_reward_norm};
  }
  std::vector<double> as_vector() const {
    auto a = as_array();
    return std::vector<double>(a.begin(), a.end());
  }

  bool operator==(const StateVector&) const = default;
};

inline constexpr int kStateDim = 7;

// Reference scales for the unbounded features.
struct StateNorms {
  double ref_cpm = 1000.0;
  double ref_value = 1.0;
};

// Linear bid b = v / lambda.
double compute_bid(double value, double lambda);

// lambda_prev * (1 + rate[action_index]).
double apply_action(double lambda_prev, int action_index, const ActionSpace& space);

// State observed after settling a slot: `prev` is the environment state
// captured just before the step, `outcome` the slot result.
StateVector build_state(const EnvState& prev, const StepOutcome& outcome, int T,
                        const StateNorms& norms);

// State at episode start, before any slot ran: full budget, full horizon,
// all slot statistics zero.
StateVector initial_state(int T);

}  // namespace drlb
