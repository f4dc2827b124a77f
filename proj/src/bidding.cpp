#include "drlb/bidding.hpp"

#include <stdexcept>

namespace drlb {

ActionSpace::ActionSpace(std::vector<double> r) : rates(std::move(r)) {
  if (rates.empty()) throw std::invalid_argument("action space is empty");
  for (std::size_t i = 0; i < rates.size(); ++i) {
    if (rates[i] <= -1.0)
      throw std::invalid_argument("adjustment rate must be > -1");
    if (i > 0 && rates[i] <= rates[i - 1])
      throw std::invalid_argument("adjustment rates must be strictly increasing");
  }
}

double compute_bid(double value, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (value < 0.0) throw std::invalid_argument("value must be >= 0");
  return value / lambda;
}

double apply_action(double lambda_prev, int action_index, const ActionSpace& space) {
  if (!(lambda_prev > 0.0)) throw std::invalid_argument("lambda must be > 0");
  if (action_index < 0 || action_index >= space.size())
    throw std::invalid_argument("action index out of range");
  return lambda_prev * (1.0 + space.rates[static_cast<std::size_t>(action_index)]);
}

StateVector build_state(const EnvState& prev, const StepOutcome& outcome, int T,
                        const StateNorms& norms) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  const int t = prev.t + 1;
  const double budget_prev = prev.budget_left;
  const double budget_now = budget_prev - outcome.cost;

  StateVector s;
  s.t_norm = static_cast<double>(t) / T;
  s.budget_left_norm = prev.budget_total > 0.0 ? budget_now / prev.budget_total : 0.0;
  s.rol_norm = static_cast<double>(T - t) / T;
  s.bcr = budget_prev > 0.0 ? (budget_now - budget_prev) / budget_prev : 0.0;
  s.cpm_norm = norms.ref_cpm > 0.0 ? outcome.cpm / norms.ref_cpm : 0.0;
  s.win_rate = outcome.win_rate;
  s.last_reward_norm = norms.ref_value > 0.0 ? outcome.reward / norms.ref_value : 0.0;
  return s;
}

StateVector initial_state(int T) {
  if (T < 1) throw std::invalid_argument("T must be >= 1");
  StateVector s;
  s.t_norm = 0.0;
  s.budget_left_norm = 1.0;
  s.rol_norm = 1.0;
  return s;
}

}  // namespace drlb
