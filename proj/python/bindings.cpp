#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "drlb/agent.hpp"
#include "drlb/auction.hpp"
#include "drlb/baselines.hpp"
#include "drlb/bidding.hpp"
#include "drlb/mdp.hpp"
#include "drlb/mlp.hpp"
#include "drlb/oracle.hpp"
#include "drlb/rewardnet.hpp"
#include "drlb/synth.hpp"

namespace py = pybind11;
using namespace drlb;

PYBIND11_MODULE(_drlb, m) {
  m.doc() = "Budget-constrained bidding lab: auction environment, "
            "lambda control, knapsack oracle and DQN building blocks";

  py::class_<Impression>(m, "Impression")
      .def(py::init([](int slot, double value, double market_price,
                       std::optional<int> click) {
             Impression im;
             im.slot = slot;
             im.value = value;
             im.market_price = market_price;
             im.click = click;
             return im;
           }),
           py::arg("slot"), py::arg("value"), py::arg("market_price"),
           py::arg("click") = std::nullopt)
      .def_readwrite("slot", &Impression::slot)
      .def_readwrite("value", &Impression::value)
      .def_readwrite("market_price", &Impression::market_price)
      .def_readwrite("click", &Impression::click);

  py::class_<EpisodeData, std::shared_ptr<EpisodeData>>(m, "EpisodeData")
      .def(py::init([](std::string episode_id, int T, std::vector<Impression> imps) {
             auto data = std::make_shared<EpisodeData>();
             data->episode_id = std::move(episode_id);
             data->T = T;
             data->impressions = std::move(imps);
             validate_episode(*data);
             return data;
           }),
           py::arg("episode_id"), py::arg("T"), py::arg("impressions"))
      .def_readonly("episode_id", &EpisodeData::episode_id)
      .def_readonly("T", &EpisodeData::T)
      .def_readonly("impressions", &EpisodeData::impressions)
      .def("total_market_cost", &EpisodeData::total_market_cost)
      .def("total_value", &EpisodeData::total_value);

  py::class_<EnvState>(m, "EnvState")
      .def_readonly("t", &EnvState::t)
      .def_readonly("budget_total", &EnvState::budget_total)
      .def_readonly("budget_left", &EnvState::budget_left)
      .def_readonly("lambda_", &EnvState::lambda)
      .def_readonly("cumulative_value", &EnvState::cumulative_value)
      .def_readonly("terminal", &EnvState::terminal);

  py::class_<StepOutcome>(m, "StepOutcome")
      .def_readonly("reward", &StepOutcome::reward)
      .def_readonly("cost", &StepOutcome::cost)
      .def_readonly("wins", &StepOutcome::wins)
      .def_readonly("auctions", &StepOutcome::auctions)
      .def_readonly("cpm", &StepOutcome::cpm)
      .def_readonly("win_rate", &StepOutcome::win_rate);

  py::class_<AuctionEnv>(m, "AuctionEnv")
      .def(py::init([](std::shared_ptr<EpisodeData> data) {
             return AuctionEnv(std::move(data));
           }),
           py::arg("data"))
      .def("reset", &AuctionEnv::reset, py::arg("budget"), py::arg("lambda0"))
      .def("step", &AuctionEnv::step, py::arg("lambda_new"))
      .def("is_terminal", &AuctionEnv::is_terminal)
      .def_property_readonly("state", &AuctionEnv::state);

  m.def("compute_bid", &compute_bid, py::arg("value"), py::arg("lambda_"));
  m.def(
      "apply_action",
      [](double lambda_prev, int action_index) {
        return apply_action(lambda_prev, action_index, ActionSpace());
      },
      py::arg("lambda_prev"), py::arg("action_index"));
  m.def("action_rates", [] { return ActionSpace().rates; });

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("lambda_star", &OracleResult::lambda_star)
      .def_readonly("r_star", &OracleResult::r_star)
      .def_readonly("spend", &OracleResult::spend);

  m.def("optimal_lambda_greedy", &optimal_lambda_greedy, py::arg("impressions"),
        py::arg("budget"));
  m.def("brute_force_value", &brute_force_value, py::arg("impressions"),
        py::arg("budget"));
  m.def("r_over_rstar", &r_over_rstar, py::arg("r"), py::arg("r_star"));
  m.def(
      "deviation_group",
      [](double lambda0, double lambda_star) {
        const auto g = deviation_group(lambda0, lambda_star);
        return std::make_pair(g.lower, g.upper);
      },
      py::arg("lambda0"), py::arg("lambda_star"));

  py::class_<MdpDescription>(m, "MdpDescription")
      .def(py::init([](int S, int A, int T, std::vector<int> init,
                       std::vector<std::vector<std::vector<int>>> succ,
                       std::vector<std::vector<double>> rew) {
             MdpDescription d;
             d.num_states = S;
             d.num_actions = A;
             d.horizon = T;
             d.initial_states = std::move(init);
             d.successors = std::move(succ);
             d.rewards = std::move(rew);
             return d;
           }),
           py::arg("num_states"), py::arg("num_actions"), py::arg("horizon"),
           py::arg("initial_states"), py::arg("successors"), py::arg("rewards"));
  m.def("theorem_equivalence_check", &theorem_equivalence_check, py::arg("mdp"));

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("momentum", &TrainConfig::momentum)
      .def_readwrite("batch_size", &TrainConfig::batch_size);

  py::class_<MlpNetwork>(m, "MlpNetwork")
      .def(py::init<std::vector<int>, std::uint64_t>(), py::arg("layer_sizes"),
           py::arg("seed"))
      .def_static("zeros", &MlpNetwork::zeros, py::arg("layer_sizes"))
      .def_property_readonly("layer_sizes", &MlpNetwork::layer_sizes)
      .def("forward", &MlpNetwork::forward, py::arg("input"))
      .def("sgd_step", &MlpNetwork::sgd_step, py::arg("inputs"), py::arg("targets"),
           py::arg("output_indices"), py::arg("config"))
      .def("gradient_check", &MlpNetwork::gradient_check, py::arg("input"),
           py::arg("target"), py::arg("output_index"), py::arg("h") = 1e-5)
      .def("save_string", &MlpNetwork::save_string)
      .def_static("load_string", &MlpNetwork::load_string, py::arg("text"))
      .def("same_parameters", &MlpNetwork::same_parameters, py::arg("other"));

  py::class_<AgentConfig>(m, "AgentConfig")
      .def(py::init<>())
      .def_readwrite("gamma", &AgentConfig::gamma)
      .def_readwrite("epsilon_floor", &AgentConfig::epsilon_floor)
      .def_readwrite("epsilon_cap", &AgentConfig::epsilon_cap)
      .def_readwrite("adaptive_epsilon_min", &AgentConfig::adaptive_epsilon_min)
      .def_readwrite("anneal_rate", &AgentConfig::anneal_rate)
      .def_readwrite("adaptive", &AgentConfig::adaptive);

  m.def("epsilon_at", &epsilon_at, py::arg("t"), py::arg("config"));
  m.def("is_unimodal", &is_unimodal, py::arg("q_values"));

  m.def(
      "flb_bid",
      [](double value, double lambda0) {
        BaselineConfig cfg;
        cfg.lambda0 = lambda0;
        return flb_bid(value, cfg);
      },
      py::arg("value"), py::arg("lambda0"));
  m.def(
      "bslb_bid",
      [](double value, double time_left_ratio, double budget_left_ratio,
         double lambda0, double delta_min, double delta_max) {
        BaselineConfig cfg;
        cfg.lambda0 = lambda0;
        cfg.delta_min = delta_min;
        cfg.delta_max = delta_max;
        return bslb_bid(value, time_left_ratio, budget_left_ratio, cfg);
      },
      py::arg("value"), py::arg("time_left_ratio"), py::arg("budget_left_ratio"),
      py::arg("lambda0"), py::arg("delta_min") = 0.1, py::arg("delta_max") = 10.0);

  py::class_<SynthesisSpec>(m, "SynthesisSpec")
      .def(py::init<>())
      .def_readwrite("episodes", &SynthesisSpec::episodes)
      .def_readwrite("T", &SynthesisSpec::T)
      .def_readwrite("poisson_arrivals", &SynthesisSpec::poisson_arrivals)
      .def_readwrite("per_slot_mean", &SynthesisSpec::per_slot_mean)
      .def_readwrite("beta_a", &SynthesisSpec::beta_a)
      .def_readwrite("beta_b", &SynthesisSpec::beta_b)
      .def_readwrite("value_scale", &SynthesisSpec::value_scale)
      .def_readwrite("price_mu", &SynthesisSpec::price_mu)
      .def_readwrite("price_sigma", &SynthesisSpec::price_sigma)
      .def_readwrite("correlation", &SynthesisSpec::correlation)
      .def_readwrite("value_ramp_lo", &SynthesisSpec::value_ramp_lo)
      .def_readwrite("value_ramp_hi", &SynthesisSpec::value_ramp_hi)
      .def_readwrite("regime_shift_slot", &SynthesisSpec::regime_shift_slot)
      .def_readwrite("regime_shift_scale", &SynthesisSpec::regime_shift_scale);

  m.def(
      "generate_synthetic",
      [](const SynthesisSpec& spec, std::uint64_t seed) {
        std::vector<std::shared_ptr<EpisodeData>> out;
        for (auto& ep : generate_synthetic(spec, seed))
          out.push_back(std::make_shared<EpisodeData>(std::move(ep)));
        return out;
      },
      py::arg("spec"), py::arg("seed"));
}
