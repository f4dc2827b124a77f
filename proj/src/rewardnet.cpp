#include "drlb/rewardnet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drlb {

StateActionKey make_key(const StateVector& state, int action, double grid) {
  if (!(grid > 0.0)) throw std::invalid_argument("grid must be > 0");
  StateActionKey key;
  const auto features = state.as_array();
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (!std::isfinite(features[i]))
      throw std::invalid_argument("state feature is not finite");
    key.cells[i] = static_cast<std::int32_t>(std::llround(features[i] / grid));
  }
  key.action = action;
  return key;
}

RewardStore::RewardStore(std::size_t capacity, double decay)
    : capacity_(capacity), decay_(decay) {
  if (capacity_ == 0) throw std::invalid_argument("capacity must be >= 1");
  if (decay_ < 0.0) throw std::invalid_argument("decay must be >= 0");
}

double RewardStore::decayed_score(const RewardStoreEntry& e, long long now) const {
  const double dt = static_cast<double>(now - e.last_access);
  return std::exp2(-decay_ * dt) * e.lrfu_score;
}

double RewardStore::update(const StateActionKey& key, double episode_return,
                           long long now) {
  auto it = entries_.find(key);
  if (it == entries_.end()) {
    RewardStoreEntry e;
    e.best_return = episode_return;
    e.lrfu_score = 1.0;
    e.last_access = now;
    e.insert_seq = next_seq_++;
    entries_.emplace(key, e);
    return episode_return;
  }
  auto& e = it->second;
  e.lrfu_score = 1.0 + decayed_score(e, now);
  e.last_access = now;
  e.best_return = std::max(e.best_return, episode_return);
  return e.best_return;
}

std::optional<double> RewardStore::lookup(const StateActionKey& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.best_return;
}

void RewardStore::enforce_capacity(long long now) {
  while (entries_.size() > capacity_) {
    auto victim = entries_.end();
    double victim_score = 0.0;
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      const double score = decayed_score(it->second, now);
      if (victim == entries_.end() || score < victim_score ||
          (score == victim_score &&
           (it->second.last_access < victim->second.last_access ||
            (it->second.last_access == victim->second.last_access &&
             it->second.insert_seq < victim->second.insert_seq)))) {
        victim = it;
        victim_score = score;
      }
    }
    entries_.erase(victim);
  }
}

std::vector<std::pair<StateActionKey, RewardStoreEntry>> RewardStore::snapshot() const {
  std::vector<std::pair<StateActionKey, RewardStoreEntry>> out(entries_.begin(),
                                                               entries_.end());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second.insert_seq < b.second.insert_seq;
  });
  return out;
}

void finalize_episode(RewardStore& store, const EpisodeRecord& record,
                      RewardNetReplay& d2, long long episode_index,
                      double key_grid) {
  if (record.empty()) throw std::invalid_argument("empty episode record");
  for (const auto& [state, action] : record.pairs) {
    const auto key = make_key(state, action, key_grid);
    const double value = store.update(key, record.total_return, episode_index);
    d2.push(D2Entry{state, action, value});
    store.enforce_capacity(episode_index);
  }
}

double predict_reward(const MlpNetwork& net, const StateVector& state, int action) {
  const auto out = net.forward(state.as_vector());
  if (action < 0 || action >= static_cast<int>(out.size()))
    throw std::invalid_argument("action out of range");
  return out[static_cast<std::size_t>(action)];
}

std::optional<double> train_rewardnet_step(MlpNetwork& net, const RewardNetReplay& d2,
                                           const TrainConfig& cfg, Rng& rng) {
  if (d2.size() < static_cast<std::size_t>(cfg.batch_size)) return std::nullopt;
  std::vector<std::vector<double>> inputs;
  std::vector<double> targets;
  std::vector<int> indices;
  inputs.reserve(static_cast<std::size_t>(cfg.batch_size));
  const auto& buf = d2.buffer();
  for (int j = 0; j < cfg.batch_size; ++j) {
    const auto& e = buf[static_cast<std::size_t>(rng.uniform_int(static_cast<int>(buf.size())))];
    inputs.push_back(e.state.as_vector());
    targets.push_back(e.value);
    indices.push_back(e.action);
  }
  return net.sgd_step(inputs, targets, indices, cfg);
}

}  // namespace drlb
