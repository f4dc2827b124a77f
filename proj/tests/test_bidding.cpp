#include <doctest.h>

#include "drlb/bidding.hpp"
#include "drlb/rng.hpp"

using namespace drlb;

TEST_CASE("compute_bid divides value by lambda") {
  CHECK(compute_bid(0.02, 0.1) == doctest::Approx(0.2));
  CHECK(compute_bid(0.0, 5.0) == 0.0);
  CHECK(compute_bid(0.05, 0.05) == doctest::Approx(1.0));
  CHECK_THROWS_AS(compute_bid(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_bid(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(compute_bid(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("apply_action scales lambda by 1 + rate") {
  const ActionSpace space;
  REQUIRE(space.size() == 7);
  CHECK(apply_action(1.0, 6, space) == doctest::Approx(1.08));
  CHECK(apply_action(2.0, 3, space) == 2.0);  // identity action
  CHECK(apply_action(1.0, 0, space) == doctest::Approx(0.92));
  CHECK_THROWS_AS(apply_action(1.0, 7, space), std::invalid_argument);
  CHECK_THROWS_AS(apply_action(1.0, -1, space), std::invalid_argument);
  CHECK_THROWS_AS(apply_action(0.0, 0, space), std::invalid_argument);
}

TEST_CASE("default action space matches the seven published rates") {
  const ActionSpace space;
  const std::vector<double> want = {-0.08, -0.03, -0.01, 0.0, 0.01, 0.03, 0.08};
  CHECK(space.rates == want);
}

TEST_CASE("action space validation") {
  CHECK_THROWS_AS(ActionSpace({0.1, 0.05}), std::invalid_argument);
  CHECK_THROWS_AS(ActionSpace({-1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ActionSpace(std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("lambda stays positive under any action sequence") {
  const ActionSpace space;
  Rng rng(7);
  double lambda = 1.0;
  for (int i = 0; i < 10000; ++i) {
    lambda = apply_action(lambda, rng.uniform_int(space.size()), space);
    CHECK(lambda > 0.0);
  }
}

TEST_CASE("build_state computes the seven features") {
  EnvState prev;
  prev.t = 9;
  prev.budget_total = 200.0;
  prev.budget_left = 100.0;
  StepOutcome out;
  out.cost = 10.0;
  out.reward = 0.5;
  out.cpm = 250.0;
  out.wins = 4;
  out.auctions = 8;
  out.win_rate = 0.5;
  StateNorms norms;
  norms.ref_cpm = 1000.0;
  norms.ref_value = 2.0;

  const auto s = build_state(prev, out, 96, norms);
  CHECK(s.t_norm == doctest::Approx(10.0 / 96.0));
  CHECK(s.budget_left_norm == doctest::Approx(90.0 / 200.0));
  CHECK(s.rol_norm == doctest::Approx(86.0 / 96.0));
  CHECK(s.bcr == doctest::Approx(-0.1));
  CHECK(s.cpm_norm == doctest::Approx(0.25));
  CHECK(s.win_rate == doctest::Approx(0.5));
  CHECK(s.last_reward_norm == doctest::Approx(0.25));
}

TEST_CASE("zero-win slot yields degenerate statistics") {
  EnvState prev;
  prev.t = 0;
  prev.budget_total = 100.0;
  prev.budget_left = 100.0;
  StepOutcome out;  // no wins
  const auto s = build_state(prev, out, 96, StateNorms{});
  CHECK(s.cpm_norm == 0.0);
  CHECK(s.win_rate == 0.0);
  CHECK(s.last_reward_norm == 0.0);
  CHECK(s.bcr == 0.0);
}

TEST_CASE("build_state is pure") {
  EnvState prev;
  prev.t = 3;
  prev.budget_total = 50.0;
  prev.budget_left = 20.0;
  StepOutcome out;
  out.cost = 1.0;
  out.reward = 0.2;
  out.cpm = 125.0;
  out.win_rate = 0.25;
  const auto a = build_state(prev, out, 48, StateNorms{});
  const auto b = build_state(prev, out, 48, StateNorms{});
  CHECK(a == b);
}

TEST_CASE("initial state") {
  const auto s = initial_state(96);
  CHECK(s.t_norm == 0.0);
  CHECK(s.budget_left_norm == 1.0);
  CHECK(s.rol_norm == 1.0);
  CHECK(s.bcr == 0.0);
  CHECK(s.cpm_norm == 0.0);
  CHECK(s.win_rate == 0.0);
  CHECK(s.last_reward_norm == 0.0);
}
