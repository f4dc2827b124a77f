#pragma once

#include <vector>

namespace drlb {

// Description of a finite episodic MDP with a fixed horizon. successors[s][a]
// lists possible next states; the equivalence check below requires exactly
// one per pair (deterministic) and exactly one initial state.
struct MdpDescription {
  int num_states = 0;
  int num_actions = 0;
  int horizon = 0;
  std::vector<int> initial_states;
  std::vector<std::vector<std::vector<int>>> successors;  // [s][a] -> states
  std::vector<std::vector<double>> rewards;               // [s][a]
};

// Verifies the optimal-policy equivalence between the immediate reward r and
// the episode-max reward built from it: for every state-action pair,
// substitute the highest return among all episodes that visit the pair, then
// check that every policy optimal under the substituted reward attains the
// optimal return under r. Policies are stationary maps state -> action and
// the episode set is exhaustive over them.
// Throws std::invalid_argument on non-deterministic transitions, multiple
// initial states, or an enumeration too large to be exhaustive.
bool theorem_equivalence_check(const MdpDescription& mdp);

}  // namespace drlb
