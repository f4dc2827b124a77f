#include <doctest.h>

#include <map>

#include "drlb/rewardnet.hpp"
#include "drlb/rng.hpp"

using namespace drlb;

namespace {

StateVector state_of(double t_norm, double budget = 1.0) {
  StateVector s;
  s.t_norm = t_norm;
  s.budget_left_norm = budget;
  return s;
}

}  // namespace

TEST_CASE("keys quantize to a 1e-2 grid") {
  const auto a = make_key(state_of(0.1234), 2);
  const auto b = make_key(state_of(0.1234), 2);
  CHECK(a == b);

  // a sub-grid perturbation aliases to the same key
  CHECK(make_key(state_of(0.1234 + 1e-6), 2) == a);
  // a different action does not
  CHECK_FALSE(make_key(state_of(0.1234), 3) == a);
  // a full grid step does not
  CHECK_FALSE(make_key(state_of(0.1334), 2) == a);

  StateVector bad;
  bad.bcr = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(make_key(bad, 0), std::invalid_argument);
}

TEST_CASE("store keeps the maximum episode return per key") {
  RewardStore store(100);
  RewardNetReplay d2(100);
  EpisodeRecord rec;
  rec.add(state_of(0.1), 0, 4.0);
  rec.add(state_of(0.2), 1, 6.0);
  REQUIRE(rec.total_return == doctest::Approx(10.0));

  finalize_episode(store, rec, d2, 0, 0.01);
  CHECK(store.lookup(make_key(state_of(0.1), 0)) == 10.0);
  CHECK(store.lookup(make_key(state_of(0.2), 1)) == 10.0);
  CHECK(d2.size() == 2);

  // a worse episode later does not lower the stored value
  EpisodeRecord worse;
  worse.add(state_of(0.1), 0, 7.0);
  finalize_episode(store, worse, d2, 1, 0.01);
  CHECK(store.lookup(make_key(state_of(0.1), 0)) == 10.0);

  // a better one raises it
  EpisodeRecord better;
  better.add(state_of(0.1), 0, 12.0);
  finalize_episode(store, better, d2, 2, 0.01);
  CHECK(store.lookup(make_key(state_of(0.1), 0)) == 12.0);

  // D2 recorded the store value at each insertion time
  CHECK(d2.buffer()[0].value == 10.0);
  CHECK(d2.buffer()[2].value == 10.0);
  CHECK(d2.buffer()[3].value == 12.0);

  CHECK_THROWS_AS(finalize_episode(store, EpisodeRecord{}, d2, 3, 0.01),
                  std::invalid_argument);
}

TEST_CASE("store semantics match a brute-force max over random episodes") {
  Rng rng(314);
  RewardStore store(100000);  // effectively unbounded
  RewardNetReplay d2(100000);
  std::map<std::pair<std::array<std::int32_t, 7>, int>, double> oracle;

  for (int episode = 0; episode < 200; ++episode) {
    EpisodeRecord rec;
    const int len = 1 + rng.uniform_int(6);
    for (int i = 0; i < len; ++i)
      rec.add(state_of(rng.uniform_int(8) * 0.01, rng.uniform_int(4) * 0.25),
              rng.uniform_int(3), rng.uniform(0.0, 1.0));
    finalize_episode(store, rec, d2, episode, 0.01);
    for (const auto& [s, a] : rec.pairs) {
      const auto key = make_key(s, a, 0.01);
      auto& best = oracle.try_emplace({key.cells, key.action}, rec.total_return).first->second;
      best = std::max(best, rec.total_return);
    }
  }
  CHECK(store.size() == oracle.size());
  for (const auto& [key, want] : oracle) {
    StateActionKey k;
    k.cells = key.first;
    k.action = key.second;
    CHECK(store.lookup(k) == want);
  }
}

TEST_CASE("LRFU scoring and eviction") {
  RewardStore store(2, 0.5);
  // three keys, capacity two
  const auto k0 = make_key(state_of(0.00), 0);
  const auto k1 = make_key(state_of(0.10), 0);
  const auto k2 = make_key(state_of(0.20), 0);

  store.update(k0, 1.0, 0);
  store.update(k0, 1.0, 1);  // score = 1 + 2^-0.5 ~ 1.707 at episode 1
  store.update(k1, 2.0, 1);  // score = 1
  CHECK(store.size() == 2);

  store.update(k2, 3.0, 2);  // overflow; scores at now=2: k0 ~1.207, k1 0.707, k2 1
  store.enforce_capacity(2);
  CHECK(store.size() == 2);
  CHECK_FALSE(store.lookup(k1).has_value());  // k1 had the lowest decayed score
  CHECK(store.lookup(k0).has_value());
  CHECK(store.lookup(k2).has_value());
}

TEST_CASE("LRFU prefers frequency over bare recency") {
  RewardStore store(1, 0.5);
  const auto hot = make_key(state_of(0.00), 0);
  const auto cold = make_key(state_of(0.10), 0);
  for (long long e = 0; e < 5; ++e) store.update(hot, 1.0, e);
  store.update(cold, 1.0, 5);
  store.enforce_capacity(5);
  // the frequently accessed key survives even though cold was touched last
  CHECK(store.lookup(hot).has_value());
  CHECK_FALSE(store.lookup(cold).has_value());
}

TEST_CASE("prediction reads the action component") {
  auto net = MlpNetwork::zeros({7, 3});
  net.biases_mut(0) = {1.0, 2.0, 3.0};
  CHECK(predict_reward(net, state_of(0.5), 1) == doctest::Approx(2.0));
  CHECK(predict_reward(MlpNetwork::zeros({7, 3}), state_of(0.5), 2) == 0.0);
  CHECK_THROWS_AS(predict_reward(net, state_of(0.5), 9), std::invalid_argument);
}

TEST_CASE("rewardnet regression training") {
  TrainConfig cfg;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.01;
  cfg.momentum = 0.9;
  Rng rng(2);

  MlpNetwork net({7, 16, 3}, 11);
  RewardNetReplay d2(100);
  CHECK_FALSE(train_rewardnet_step(net, d2, cfg, rng).has_value());  // no-op

  for (int i = 0; i < 8; ++i) d2.push({state_of(0.25), 1, 5.0});
  double first = 1e18, last = 0.0;
  for (int i = 0; i < 3000; ++i) {
    const auto loss = train_rewardnet_step(net, d2, cfg, rng);
    REQUIRE(loss.has_value());
    if (i == 0) first = *loss;
    last = *loss;
  }
  CHECK(last < first);
  CHECK(predict_reward(net, state_of(0.25), 1) == doctest::Approx(5.0).epsilon(0.002));

  // zero learning rate freezes the loss
  cfg.learning_rate = 0.0;
  cfg.momentum = 0.0;
  const auto l1 = train_rewardnet_step(net, d2, cfg, rng);
  const auto l2 = train_rewardnet_step(net, d2, cfg, rng);
  CHECK(*l1 == *l2);
}
