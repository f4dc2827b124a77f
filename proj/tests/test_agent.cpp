#include <doctest.h>

#include <cmath>

#include "drlb/agent.hpp"
#include "helpers.hpp"

using namespace drlb;

TEST_CASE("epsilon schedule matches max(0.95 - r*t, 0.05)") {
  AgentConfig cfg;
  cfg.anneal_rate = 2e-5;
  CHECK(epsilon_at(0, cfg) == doctest::Approx(0.95));
  CHECK(epsilon_at(45000, cfg) == doctest::Approx(0.05));
  cfg.anneal_rate = 1e-5;
  CHECK(epsilon_at(10000, cfg) == doctest::Approx(0.85));
  CHECK_THROWS_AS(epsilon_at(-1, cfg), std::invalid_argument);
}

TEST_CASE("epsilon stays within its bounds") {
  AgentConfig cfg;
  cfg.anneal_rate = 3e-4;
  for (long long t = 0; t < 100000; t += 37) {
    const double e = epsilon_at(t, cfg);
    CHECK(e >= cfg.epsilon_floor);
    CHECK(e <= cfg.epsilon_cap);
  }
}

TEST_CASE("unimodality") {
  CHECK(is_unimodal({1, 2, 3, 2, 1}));
  CHECK_FALSE(is_unimodal({1, 3, 2, 3}));
  CHECK(is_unimodal({1, 2, 3}));
  CHECK(is_unimodal({3, 2, 1}));
  CHECK(is_unimodal({2, 2, 2}));
  CHECK(is_unimodal({1, 2, 2, 1}));
  CHECK(is_unimodal({5}));
  CHECK_FALSE(is_unimodal({1, 2, 1, 2, 1}));
  CHECK_FALSE(is_unimodal({3, 1, 3}));
  CHECK_THROWS_AS(is_unimodal({}), std::invalid_argument);
}

TEST_CASE("greedy selection with epsilon zero") {
  AgentConfig cfg;
  Rng rng(1);
  const auto choice = select_action({0.0, 5.0, 1.0}, 0.0, cfg, rng);
  CHECK(choice.action == 1);
  CHECK(choice.epsilon_used == 0.0);
}

TEST_CASE("greedy ties break to the lowest index") {
  AgentConfig cfg;
  Rng rng(1);
  CHECK(select_action({2.0, 2.0, 1.0}, 0.0, cfg, rng).action == 0);
}

TEST_CASE("argmax is invariant under positive rescaling") {
  AgentConfig cfg;
  Rng rng(9);
  for (int it = 0; it < 100; ++it) {
    std::vector<double> q(7);
    for (auto& v : q) v = rng.uniform(-1.0, 1.0);
    const double k = rng.uniform(0.1, 10.0);
    std::vector<double> scaled = q;
    for (auto& v : scaled) v *= k;
    Rng r1(5), r2(5);
    CHECK(select_action(q, 0.0, cfg, r1).action ==
          select_action(scaled, 0.0, cfg, r2).action);
  }
}

TEST_CASE("non-unimodal values raise exploration to 0.5") {
  AgentConfig cfg;
  Rng rng(1);
  const auto choice = select_action({1.0, 3.0, 2.0, 3.0, 1.0, 0.0, 0.0}, 0.1, cfg, rng);
  CHECK(choice.epsilon_used == doctest::Approx(0.5));

  // with adaptation off the annealed epsilon is used as-is
  cfg.adaptive = false;
  const auto plain = select_action({1.0, 3.0, 2.0, 3.0, 1.0, 0.0, 0.0}, 0.1, cfg, rng);
  CHECK(plain.epsilon_used == doctest::Approx(0.1));

  // an already-high epsilon is not reduced
  cfg.adaptive = true;
  const auto high = select_action({1.0, 3.0, 2.0, 3.0, 1.0, 0.0, 0.0}, 0.9, cfg, rng);
  CHECK(high.epsilon_used == doctest::Approx(0.9));
}

TEST_CASE("epsilon one explores uniformly") {
  AgentConfig cfg;
  Rng rng(12345);
  const int n = 7, draws = 10000;
  std::vector<int> counts(n, 0);
  for (int i = 0; i < draws; ++i)
    ++counts[static_cast<std::size_t>(
        select_action(std::vector<double>(n, 0.0), 1.0, cfg, rng).action)];
  const double expect = static_cast<double>(draws) / n;
  const double sigma = std::sqrt(expect * (1.0 - 1.0 / n));
  for (int c : counts) CHECK(std::fabs(c - expect) <= 3.0 * sigma);
}

TEST_CASE("td targets") {
  auto target = MlpNetwork::zeros({7, 7});
  for (int o = 0; o < 7; ++o) target.biases_mut(0)[static_cast<std::size_t>(o)] = o == 2 ? 2.0 : -1.0;

  Transition terminal;
  terminal.reward = 2.0;
  terminal.next_terminal = true;
  Transition mid;
  mid.reward = 1.0;
  mid.next_terminal = false;

  auto ys = td_targets({terminal, mid}, target, 1.0);
  CHECK(ys[0] == doctest::Approx(2.0));
  CHECK(ys[1] == doctest::Approx(3.0));  // 1 + max output 2

  ys = td_targets({mid}, target, 0.0);
  CHECK(ys[0] == doctest::Approx(1.0));
  CHECK_THROWS_AS(td_targets({}, target, 1.0), std::invalid_argument);
}

TEST_CASE("replay memory is a bounded FIFO") {
  ReplayMemory mem(5, 1);
  for (int i = 0; i < 8; ++i) {
    Transition t;
    t.reward = i;
    mem.push(t);
  }
  CHECK(mem.size() == 5);
  CHECK(mem.buffer().front().reward == 3.0);  // oldest three evicted
  CHECK(mem.buffer().back().reward == 7.0);

  auto batch = mem.sample(3);
  CHECK(batch.size() == 3);
  for (const auto& t : batch) CHECK(t.reward >= 3.0);

  ReplayMemory empty(4, 1);
  CHECK_THROWS_AS(empty.sample(1), std::logic_error);
}

TEST_CASE("lambda0 policies") {
  Rng rng(3);
  Lambda0Policy p;
  p.kind = Lambda0Policy::Kind::kFixed;
  p.value = 2.5;
  CHECK(p.pick(1.0, 9.0, rng) == 2.5);
  p.kind = Lambda0Policy::Kind::kOracle;
  CHECK(p.pick(1.5, 9.0, rng) == 1.5);
  p.kind = Lambda0Policy::Kind::kOraclePrev;
  CHECK(p.pick(1.5, 9.0, rng) == 9.0);
  p.kind = Lambda0Policy::Kind::kOracleDeviation;
  p.deviation = -0.8;
  CHECK(p.pick(2.0, 9.0, rng) == doctest::Approx(0.4));
  p.kind = Lambda0Policy::Kind::kOracleDeviationRange;
  p.dev_lo = -0.5;
  p.dev_hi = 0.5;
  for (int i = 0; i < 100; ++i) {
    const double v = p.pick(2.0, 4.0, rng);
    CHECK(v >= 2.0);
    CHECK(v <= 6.0);
  }
}

namespace {

TrainerConfig tiny_config(std::uint64_t seed, RewardMode mode) {
  TrainerConfig tc;
  tc.hidden = {8, 8};
  tc.net.batch_size = 8;
  tc.agent.replay_capacity = 500;
  tc.agent.anneal_rate = 1e-3;
  tc.agent.target_sync_period = 20;
  tc.reward_net.d2_capacity = 500;
  tc.reward_net.store_capacity = 1000;
  tc.reward_mode = mode;
  tc.lambda0.kind = Lambda0Policy::Kind::kOracleDeviationRange;
  tc.lambda0.dev_lo = -0.5;
  tc.lambda0.dev_hi = 0.5;
  tc.seed = seed;
  return tc;
}

std::vector<EpisodeSetup> tiny_episodes(int count) {
  Rng rng(404);
  std::vector<EpisodeSetup> out;
  for (int e = 0; e < count; ++e) {
    EpisodeSetup setup;
    auto data = test::random_episode(rng, 6, 4);
    while (data->impressions.empty()) data = test::random_episode(rng, 6, 4);
    setup.budget = 0.25 * data->total_market_cost();
    setup.oracle = optimal_lambda_greedy(data->impressions, setup.budget);
    setup.data = std::move(data);
    out.push_back(std::move(setup));
  }
  return out;
}

}  // namespace

TEST_CASE("zero training episodes leave the networks untouched") {
  DrlbTrainer trainer(tiny_episodes(2), tiny_config(5, RewardMode::kRewardNet));
  const MlpNetwork before = trainer.q_net();
  const auto log = trainer.run(0);
  CHECK(log.empty());
  CHECK(trainer.q_net().same_parameters(before));
  CHECK(trainer.global_step() == 0);
}

TEST_CASE("training runs are deterministic in (data, config, seed)") {
  for (const auto mode : {RewardMode::kRewardNet, RewardMode::kImmediate}) {
    DrlbTrainer a(tiny_episodes(3), tiny_config(7, mode));
    DrlbTrainer b(tiny_episodes(3), tiny_config(7, mode));
    const auto log_a = a.run(6);
    const auto log_b = b.run(6);
    REQUIRE(log_a.size() == log_b.size());
    for (std::size_t i = 0; i < log_a.size(); ++i) {
      CHECK(log_a[i].total_reward == log_b[i].total_reward);
      CHECK(log_a[i].total_cost == log_b[i].total_cost);
      CHECK(log_a[i].loss_mean == log_b[i].loss_mean);
      CHECK(log_a[i].epsilon_end == log_b[i].epsilon_end);
    }
    CHECK(a.q_net().same_parameters(b.q_net()));
    CHECK(a.reward_net().same_parameters(b.reward_net()));

    DrlbTrainer c(tiny_episodes(3), tiny_config(8, mode));
    c.run(6);
    CHECK_FALSE(c.q_net().same_parameters(a.q_net()));
  }
}

TEST_CASE("target network syncs exactly every C steps") {
  auto episodes = tiny_episodes(2);
  auto tc = tiny_config(3, RewardMode::kImmediate);
  tc.agent.target_sync_period = 1000000;  // never within this run
  DrlbTrainer trainer(episodes, tc);
  const MlpNetwork initial_target = trainer.target_net();
  trainer.run(2);
  CHECK(trainer.target_net().same_parameters(initial_target));
  CHECK_FALSE(trainer.q_net().same_parameters(initial_target));

  auto tc2 = tiny_config(3, RewardMode::kImmediate);
  tc2.agent.target_sync_period = 1;  // sync after every step
  DrlbTrainer t2(episodes, tc2);
  t2.run(2);
  CHECK(t2.target_net().same_parameters(t2.q_net()));
}

TEST_CASE("greedy rollout reports totals against the oracle") {
  auto episodes = tiny_episodes(1);
  const auto& ep = episodes[0];
  auto q = MlpNetwork::zeros({7, 7});  // all-equal Q: always the first action
  const auto report = run_greedy_episode(q, ep.data, ep.budget, ep.oracle,
                                         ep.oracle.lambda_star, ActionSpace(),
                                         StateNorms{});
  CHECK(report.steps > 0);
  CHECK(report.total_cost <= ep.budget);
  CHECK(report.r_over_rstar >= 0.0);
  CHECK(report.slot_rewards.size() == static_cast<std::size_t>(report.steps));
}
