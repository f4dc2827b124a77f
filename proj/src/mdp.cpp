#include "drlb/mdp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace drlb {

namespace {

void validate(const MdpDescription& m) {
  if (m.num_states < 1 || m.num_actions < 1 || m.horizon < 1)
    throw std::invalid_argument("MDP dimensions must be >= 1");
  if (m.horizon > 5) throw std::invalid_argument("horizon limited to 5");
  if (m.initial_states.size() != 1)
    throw std::invalid_argument("exactly one initial state required");
  const int s0 = m.initial_states[0];
  if (s0 < 0 || s0 >= m.num_states)
    throw std::invalid_argument("initial state out of range");
  if (m.successors.size() != static_cast<std::size_t>(m.num_states) ||
      m.rewards.size() != static_cast<std::size_t>(m.num_states))
    throw std::invalid_argument("successor/reward table has wrong shape");
  double policies = 1.0;
  for (int s = 0; s < m.num_states; ++s) {
    const auto& row = m.successors[static_cast<std::size_t>(s)];
    const auto& rrow = m.rewards[static_cast<std::size_t>(s)];
    if (row.size() != static_cast<std::size_t>(m.num_actions) ||
        rrow.size() != static_cast<std::size_t>(m.num_actions))
      throw std::invalid_argument("successor/reward table has wrong shape");
    for (int a = 0; a < m.num_actions; ++a) {
      const auto& succ = row[static_cast<std::size_t>(a)];
      if (succ.size() != 1)
        throw std::invalid_argument("transitions must be deterministic");
      if (succ[0] < 0 || succ[0] >= m.num_states)
        throw std::invalid_argument("successor state out of range");
    }
    policies *= m.num_actions;
    if (policies > 1e6)
      throw std::invalid_argument("policy space too large to enumerate");
  }
}

}  // namespace

bool theorem_equivalence_check(const MdpDescription& mdp) {
  validate(mdp);
  const int S = mdp.num_states, A = mdp.num_actions, T = mdp.horizon;
  const int s0 = mdp.initial_states[0];
  auto next = [&](int s, int a) { return mdp.successors[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)][0]; };
  auto rew = [&](int s, int a) { return mdp.rewards[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)]; };

  long long num_policies = 1;
  for (int s = 0; s < S; ++s) num_policies *= A;

  // Trace every stationary policy once.
  std::vector<std::vector<int>> pair_trace(static_cast<std::size_t>(num_policies));
  std::vector<double> returns(static_cast<std::size_t>(num_policies), 0.0);
  std::vector<int> policy(static_cast<std::size_t>(S), 0);
  for (long long p = 0; p < num_policies; ++p) {
    long long code = p;
    for (int s = 0; s < S; ++s) {
      policy[static_cast<std::size_t>(s)] = static_cast<int>(code % A);
      code /= A;
    }
    int s = s0;
    double ret = 0.0;
    auto& pairs = pair_trace[static_cast<std::size_t>(p)];
    pairs.reserve(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
      const int a = policy[static_cast<std::size_t>(s)];
      pairs.push_back(s * A + a);
      ret += rew(s, a);
      s = next(s, a);
    }
    returns[static_cast<std::size_t>(p)] = ret;
  }

  double v_star = -std::numeric_limits<double>::infinity();
  for (double r : returns) v_star = std::max(v_star, r);

  // Episode-max reward over the exhaustive episode set.
  std::vector<double> shaped(static_cast<std::size_t>(S * A),
                             -std::numeric_limits<double>::infinity());
  for (long long p = 0; p < num_policies; ++p)
    for (int pa : pair_trace[static_cast<std::size_t>(p)])
      shaped[static_cast<std::size_t>(pa)] =
          std::max(shaped[static_cast<std::size_t>(pa)], returns[static_cast<std::size_t>(p)]);

  double best_shaped = -std::numeric_limits<double>::infinity();
  std::vector<double> shaped_returns(static_cast<std::size_t>(num_policies), 0.0);
  for (long long p = 0; p < num_policies; ++p) {
    double sum = 0.0;
    for (int pa : pair_trace[static_cast<std::size_t>(p)])
      sum += shaped[static_cast<std::size_t>(pa)];
    shaped_returns[static_cast<std::size_t>(p)] = sum;
    best_shaped = std::max(best_shaped, sum);
  }

  // Every policy optimal under the shaped reward must be optimal under r.
  for (long long p = 0; p < num_policies; ++p)
    if (shaped_returns[static_cast<std::size_t>(p)] == best_shaped &&
        returns[static_cast<std::size_t>(p)] != v_star)
      return false;
  return true;
}

}  // namespace drlb
