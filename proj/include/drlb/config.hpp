#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "drlb/agent.hpp"
#include "drlb/synth.hpp"

namespace drlb {

struct ConfigError : std::runtime_error {
  explicit ConfigError(std::vector<std::string> msgs);
  std::vector<std::string> messages;
};

enum class DataSource { kSynthetic, kCsv };
enum class Method { kDrlb, kFlb, kBslb };

// Everything a run needs, in one validated bag. Normalization constants can
// be `auto`, resolved from the training split before the run starts.
struct ExperimentConfig {
  // [data]
  DataSource source = DataSource::kSynthetic;
  std::string path;                       // csv source
  std::uint64_t data_seed = 1000003;
  SynthesisSpec synthesis;                // also carries T
  double train_fraction = 0.7;

  // [experiment]
  Method method = Method::kDrlb;
  double budget_ratio = 0.0625;  // budget = ratio * episode market cost
  std::vector<std::uint64_t> seeds = {1};
  int episodes_train = 200;  // K
  int checkpoint_every = 10;
  Lambda0Policy lambda0_train{Lambda0Policy::Kind::kOracleDeviationRange, 1.0, 0.0,
                              -0.9, 1.0};
  Lambda0Policy lambda0_eval{Lambda0Policy::Kind::kOraclePrev, 1.0, 0.0, 0.0, 0.0};
  bool dump_store = false;

  // [agent]
  AgentConfig agent;
  RewardMode reward_mode = RewardMode::kRewardNet;

  // [network]
  std::vector<int> hidden = {100, 100, 100};
  TrainConfig net;

  // [rewardnet]
  RewardNetConfig reward_net;

  // [normalization]
  bool ref_cpm_auto = true;
  bool ref_value_auto = true;
  bool reward_scale_auto = true;
  StateNorms norms;
  double reward_scale = 1.0;

  // [baseline]
  double delta_min = 0.1;
  double delta_max = 10.0;
};

// Line-oriented `key = value` format with bracketed section headers and
// full-line `#`/`;` comments. Collects every defect (unknown key, duplicate
// key, type mismatch, bad value) with its line number before throwing.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Serializes every setting with concrete values; parse(write(c)) == c.
std::string write_config(const ExperimentConfig& cfg);

std::string to_string(const Lambda0Policy& p);
std::string to_string(Method m);

}  // namespace drlb
