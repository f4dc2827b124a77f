#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <optional>
#include <unordered_map>
#include <vector>

#include "drlb/bidding.hpp"
#include "drlb/mlp.hpp"
#include "drlb/rng.hpp"

namespace drlb {

struct RewardNetConfig {
  std::size_t d2_capacity = 50000;      // N2, FIFO regression replay
  std::size_t store_capacity = 100000;  // N3, associative store
  double lrfu_decay = 0.5;              // halving exponent per episode of idleness
  double key_grid = 0.01;               // state quantization step
};

// Quantized state plus action; continuous states need a grid to make repeat
// visits alias to the same slot.
struct StateActionKey {
  std::array<std::int32_t, kStateDim> cells{};
  int action = 0;

  bool operator==(const StateActionKey&) const = default;
};

struct StateActionKeyHash {
  std::size_t operator()(const StateActionKey& k) const {
    std::size_t h = static_cast<std::size_t>(k.action) * 0x9e3779b97f4a7c15ull;
    for (std::int32_t c : k.cells)
      h = (h ^ static_cast<std::size_t>(static_cast<std::uint32_t>(c))) * 0x100000001b3ull;
    return h;
  }
};

StateActionKey make_key(const StateVector& state, int action, double grid = 0.01);

struct RewardStoreEntry {
  double best_return = 0.0;
  double lrfu_score = 0.0;      // as of last_access
  long long last_access = 0;    // episode index
  long long insert_seq = 0;
};

// Associative store M: key -> best episode return seen so far. Accesses feed
// an exponentially decayed recency-frequency score; when the store outgrows
// its capacity the entry with the lowest score (decayed to now) goes first,
// ties resolved by older access then older insertion.
class RewardStore {
 public:
  explicit RewardStore(std::size_t capacity, double decay = 0.5);

  // Max-update plus LRFU touch at episode `now`; returns the stored value.
  double update(const StateActionKey& key, double episode_return, long long now);

  std::optional<double> lookup(const StateActionKey& key) const;
  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  double decay() const { return decay_; }

  double decayed_score(const RewardStoreEntry& e, long long now) const;

  // Evicts minimum-score entries until size <= capacity.
  void enforce_capacity(long long now);

  // Deterministic iteration order (by insertion) for dumps and tests.
  std::vector<std::pair<StateActionKey, RewardStoreEntry>> snapshot() const;

 private:
  std::size_t capacity_;
  double decay_;
  long long next_seq_ = 0;
  std::unordered_map<StateActionKey, RewardStoreEntry, StateActionKeyHash> entries_;
};

// The (s, a) pairs of one episode plus its total immediate-reward return V.
struct EpisodeRecord {
  std::vector<std::pair<StateVector, int>> pairs;
  double total_return = 0.0;

  void add(const StateVector& s, int action, double immediate_reward) {
    pairs.emplace_back(s, action);
    total_return += immediate_reward;
  }
  bool empty() const { return pairs.empty(); }
};

struct D2Entry {
  StateVector state;
  int action = 0;
  double value = 0.0;  // M(s,a) at insertion time
};

// FIFO replay feeding the reward regression.
class RewardNetReplay {
 public:
  explicit RewardNetReplay(std::size_t capacity) : capacity_(capacity) {}

  void push(D2Entry e) {
    buf_.push_back(std::move(e));
    if (buf_.size() > capacity_) buf_.pop_front();
  }
  std::size_t size() const { return buf_.size(); }
  const std::deque<D2Entry>& buffer() const { return buf_; }

 private:
  std::size_t capacity_;
  std::deque<D2Entry> buf_;
};

// End-of-episode bookkeeping: M(s,a) = max(M(s,a), V) for every visited pair,
// each refreshed value appended to D2, capacity enforced as keys are added.
void finalize_episode(RewardStore& store, const EpisodeRecord& record,
                      RewardNetReplay& d2, long long episode_index,
                      double key_grid);

// Predicted reward for (state, action): the action's component of the
// network output.
double predict_reward(const MlpNetwork& net, const StateVector& state, int action);

// One regression step toward the memorized returns. Returns the batch loss,
// or nullopt (no-op) while D2 holds fewer than batch_size entries.
std::optional<double> train_rewardnet_step(MlpNetwork& net, const RewardNetReplay& d2,
                                           const TrainConfig& cfg, Rng& rng);

}  // namespace drlb
