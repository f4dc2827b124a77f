#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace drlb {

// One auction opportunity. `value` is the predicted impression value (e.g.
// pCTR), `market_price` the highest competing bid, which is what the winner
// pays under second-price settlement.
struct Impression {
  int slot = 0;
  double value = 0.0;
  double market_price = 0.0;
  std::optional<int> click;
};

// All impressions of one episode (typically one day), grouped into T slots.
struct EpisodeData {
  std::string episode_id;
  int T = 0;
  std::vector<Impression> impressions;  // sorted by slot, arrival order within

  double total_market_cost() const;
  double total_value() const;
};

// Throws std::invalid_argument when an invariant is violated.
void validate_episode(const EpisodeData& data);

// Live bookkeeping of one episode run.
struct EnvState {
  int t = 0;
  double budget_total = 0.0;
  double budget_left = 0.0;
  double lambda = 0.0;
  double cumulative_value = 0.0;
  bool terminal = false;
};

// Aggregate outcome of one slot.
struct StepOutcome {
  double reward = 0.0;  // sum of won impression values
  double cost = 0.0;    // sum of paid market prices
  int wins = 0;
  int auctions = 0;
  double cpm = 0.0;      // cost per 1000 won impressions; 0 when wins == 0
  double win_rate = 0.0; // wins / auctions; 0 when the slot is empty
};

// Episode-level totals shared by the agent and baseline runners.
struct EpisodeReport {
  double total_reward = 0.0;
  double total_cost = 0.0;
  int steps = 0;
  int wins = 0;
  int auctions = 0;
  double r_over_rstar = 0.0;
  std::vector<double> slot_rewards;  // reward per executed slot
  std::vector<double> slot_costs;
};

// Deterministic second-price auction environment. Impressions in slot t are
// settled against bid = value / lambda; a bid wins only when it strictly
// exceeds the market price and the price still fits in the remaining budget.
// The episode terminates when all T slots ran or the budget hits exactly 0.
class AuctionEnv {
 public:
  explicit AuctionEnv(std::shared_ptr<const EpisodeData> data);

  EnvState reset(double budget, double lambda0);

  // Settles slot state().t with the given lambda and advances time.
  // Throws std::logic_error when called on a terminal state.
  StepOutcome step(double lambda_new);

  bool is_terminal() const { return state_.terminal; }
  const EnvState& state() const { return state_; }
  const EpisodeData& data() const { return *data_; }

 private:
  std::shared_ptr<const EpisodeData> data_;
  std::vector<std::pair<std::size_t, std::size_t>> slot_ranges_;
  EnvState state_;
};

}  // namespace drlb
