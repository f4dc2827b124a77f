#include <doctest.h>

#include <sstream>

#include "drlb/mlp.hpp"
#include "drlb/rng.hpp"

using namespace drlb;

TEST_CASE("zero network maps everything to zero") {
  auto net = MlpNetwork::zeros({3, 4, 2});
  const auto out = net.forward({1.0, -2.0, 3.0});
  CHECK(out == std::vector<double>{0.0, 0.0});
}

TEST_CASE("identity-like single path") {
  auto net = MlpNetwork::zeros({1, 1, 1});
  net.weights_mut(0)[0] = 1.0;
  net.weights_mut(1)[0] = 1.0;
  CHECK(net.forward({2.0}) == std::vector<double>{2.0});
  // hidden ReLU clips the negative path
  CHECK(net.forward({-2.0}) == std::vector<double>{0.0});
}

TEST_CASE("forward is deterministic") {
  MlpNetwork net({7, 10, 7}, 123);
  const auto a = net.forward({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  const auto b = net.forward({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7});
  CHECK(a == b);
  CHECK_THROWS_AS(net.forward({1.0}), std::invalid_argument);
}

TEST_CASE("seeded init is reproducible") {
  MlpNetwork a({4, 8, 3}, 99);
  MlpNetwork b({4, 8, 3}, 99);
  MlpNetwork c({4, 8, 3}, 100);
  CHECK(a.same_parameters(b));
  CHECK_FALSE(a.same_parameters(c));
}

TEST_CASE("zero learning rate leaves parameters unchanged") {
  MlpNetwork net({2, 5, 2}, 7);
  const MlpNetwork before = net;
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  const double loss = net.sgd_step({{1.0, 2.0}}, {3.0}, {1}, cfg);
  CHECK(loss >= 0.0);
  CHECK(net.same_parameters(before));
}

TEST_CASE("hand-computed gradient on a single linear unit") {
  // one input, one output, weight 0, bias 0: loss (0 - 1)^2 = 1,
  // dL/dw = 2*(out - y)*x = -2, so w moves to +2*lr
  auto net = MlpNetwork::zeros({1, 1});
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.0;
  const double loss = net.sgd_step({{1.0}}, {1.0}, {0}, cfg);
  CHECK(loss == doctest::Approx(1.0));
  CHECK(net.weights()[0][0] == doctest::Approx(0.2));
  CHECK(net.biases()[0][0] == doctest::Approx(0.2));
}

TEST_CASE("masked outputs receive no gradient") {
  MlpNetwork net({2, 4, 3}, 5);
  const MlpNetwork before = net;
  TrainConfig cfg;
  cfg.momentum = 0.0;
  net.sgd_step({{0.5, -0.25}}, {1.0}, {2}, cfg);
  // output rows 0 and 1 of the last layer never saw a gradient
  for (int o = 0; o < 2; ++o) {
    for (int i = 0; i < 4; ++i)
      CHECK(net.weights()[1][static_cast<std::size_t>(o * 4 + i)] ==
            before.weights()[1][static_cast<std::size_t>(o * 4 + i)]);
    CHECK(net.biases()[1][static_cast<std::size_t>(o)] ==
          before.biases()[1][static_cast<std::size_t>(o)]);
  }
}

TEST_CASE("momentum accumulates velocity as buffer = m*buffer + grad") {
  // Single linear unit, x=1, y=1, lr=0.1, momentum=0.5; derived by hand:
  //   step 1: grad=-2, buf=-2, w=b=0.2
  //   step 2: out=0.4, grad=-1.2, buf=0.5*(-2)-1.2=-2.2, w=b=0.42
  auto net = MlpNetwork::zeros({1, 1});
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.momentum = 0.5;
  net.sgd_step({{1.0}}, {1.0}, {0}, cfg);
  CHECK(net.weights()[0][0] == doctest::Approx(0.2));
  net.sgd_step({{1.0}}, {1.0}, {0}, cfg);
  CHECK(net.weights()[0][0] == doctest::Approx(0.42));
  CHECK(net.biases()[0][0] == doctest::Approx(0.42));
}

TEST_CASE("momentum zero reduces to the analytic plain-SGD update") {
  // w <- w - lr * 2*(out-y)*x elementwise on a linear unit with two inputs.
  auto net = MlpNetwork::zeros({2, 1});
  net.weights_mut(0) = {0.5, -0.25};
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.momentum = 0.0;
  const double out = 0.5 * 2.0 + (-0.25) * 3.0;  // 0.25
  const double err = out - 1.0;
  net.sgd_step({{2.0, 3.0}}, {1.0}, {0}, cfg);
  CHECK(net.weights()[0][0] == doctest::Approx(0.5 - 0.05 * 2.0 * err * 2.0));
  CHECK(net.weights()[0][1] == doctest::Approx(-0.25 - 0.05 * 2.0 * err * 3.0));
  CHECK(net.biases()[0][0] == doctest::Approx(-0.05 * 2.0 * err));
}

TEST_CASE("repeated steps fit a tiny regression") {
  MlpNetwork net({2, 8, 1}, 3);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.momentum = 0.9;
  const std::vector<std::vector<double>> xs = {{0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}};
  const std::vector<double> ys = {1.0, -1.0, 0.5};
  const std::vector<int> idx = {0, 0, 0};
  double loss = 1e9;
  for (int i = 0; i < 10000; ++i) loss = net.sgd_step(xs, ys, idx, cfg);
  CHECK(loss < 1e-6);
}

TEST_CASE("gradient check on seeded random networks") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    MlpNetwork net({7, 12, 10, 7}, seed);
    Rng rng(seed * 31 + 7);
    std::vector<double> input(7);
    for (auto& v : input) v = rng.uniform(-1.0, 1.0);
    const double target = rng.uniform(-1.0, 1.0);
    const int index = rng.uniform_int(7);
    CHECK(net.gradient_check(input, target, index) <= 1e-4);
  }
}

TEST_CASE("gradient check corner cases") {
  auto zero = MlpNetwork::zeros({2, 3, 2});
  CHECK(zero.gradient_check({0.5, 0.5}, 0.0, 0) == 0.0);

  auto one = MlpNetwork::zeros({1, 1});
  one.weights_mut(0)[0] = 0.7;
  CHECK(one.gradient_check({1.0}, 2.0, 0) <= 1e-6);
}

TEST_CASE("checkpoint round trip is the identity") {
  MlpNetwork net({4, 9, 5}, 17);
  const auto text = net.save_string();
  const auto loaded = MlpNetwork::load_string(text);
  CHECK(loaded.same_parameters(net));
  CHECK(loaded.save_string() == text);

  auto zero = MlpNetwork::zeros({2, 2});
  CHECK(MlpNetwork::load_string(zero.save_string()).same_parameters(zero));
}

TEST_CASE("malformed checkpoints are rejected with an offset") {
  MlpNetwork net({2, 3}, 1);
  const auto text = net.save_string();

  CHECK_THROWS_AS(MlpNetwork::load_string(text.substr(0, text.size() / 2)),
                  CheckpointError);
  CHECK_THROWS_AS(MlpNetwork::load_string("BAD v1 2 2 3"), CheckpointError);
  CHECK_THROWS_AS(MlpNetwork::load_string(text + " 1.5"), CheckpointError);
  CHECK_THROWS_AS(MlpNetwork::load_string("MLP v2 2 2 3"), CheckpointError);
  try {
    MlpNetwork::load_string(text.substr(0, text.size() - 4));
  } catch (const CheckpointError& e) {
    CHECK(e.offset > 0);
  }
}
