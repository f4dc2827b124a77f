#include "drlb/config.hpp"

#include <functional>
#include <fstream>
#include <map>
#include <sstream>

#include "drlb/numio.hpp"

namespace drlb {

namespace {

std::string join(const std::vector<std::string>& msgs) {
  std::string out = "invalid config:";
  for (const auto& m : msgs) {
    out += "\n  ";
    out += m;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> msgs)
    : std::runtime_error(join(msgs)), messages(std::move(msgs)) {}

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

struct Parser {
  std::map<std::string, RawEntry> entries;
  std::vector<std::string> errors;

  void scan(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto body = trim(line);
      if (body.empty() || body.front() == '#' || body.front() == ';') continue;
      if (body.front() == '[') {
        if (body.back() != ']') {
          errors.push_back("line " + std::to_string(lineno) + ": unterminated section header");
          continue;
        }
        section = std::string(trim(body.substr(1, body.size() - 2)));
        if (section.empty())
          errors.push_back("line " + std::to_string(lineno) + ": empty section name");
        continue;
      }
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
        continue;
      }
      const std::string key(trim(body.substr(0, eq)));
      const std::string value(trim(body.substr(eq + 1)));
      if (key.empty()) {
        errors.push_back("line " + std::to_string(lineno) + ": empty key");
        continue;
      }
      const std::string full = section.empty() ? key : section + "." + key;
      auto [it, inserted] = entries.emplace(full, RawEntry{value, lineno});
      if (!inserted) {
        errors.push_back("line " + std::to_string(lineno) + ": duplicate key '" + full +
                         "' (first set on line " + std::to_string(it->second.line) + ")");
      }
    }
  }

  void fail(const RawEntry& e, const std::string& key, const std::string& why) {
    errors.push_back("line " + std::to_string(e.line) + ": key '" + key + "': " + why);
  }

  // Each known key consumes its entry; leftovers are unknown keys.
  void take(const std::string& key, const std::function<void(const RawEntry&)>& apply) {
    auto it = entries.find(key);
    if (it == entries.end()) return;
    apply(it->second);
    entries.erase(it);
  }

  void take_double(const std::string& key, double& slot,
                   const std::function<bool(double)>& ok, const std::string& req) {
    take(key, [&](const RawEntry& e) {
      auto v = parse_double(e.value);
      if (!v) return fail(e, key, "expected a real number, got '" + e.value + "'");
      if (!ok(*v)) return fail(e, key, req);
      slot = *v;
    });
  }

  void take_int(const std::string& key, int& slot,
                const std::function<bool(long long)>& ok, const std::string& req) {
    take(key, [&](const RawEntry& e) {
      auto v = parse_int(e.value);
      if (!v) return fail(e, key, "expected an integer, got '" + e.value + "'");
      if (!ok(*v)) return fail(e, key, req);
      slot = static_cast<int>(*v);
    });
  }

  void take_size(const std::string& key, std::size_t& slot) {
    take(key, [&](const RawEntry& e) {
      auto v = parse_int(e.value);
      if (!v || *v < 1) return fail(e, key, "expected a positive integer");
      slot = static_cast<std::size_t>(*v);
    });
  }

  void take_u64(const std::string& key, std::uint64_t& slot) {
    take(key, [&](const RawEntry& e) {
      auto v = parse_int(e.value);
      if (!v || *v < 0) return fail(e, key, "expected a non-negative integer");
      slot = static_cast<std::uint64_t>(*v);
    });
  }

  void take_bool(const std::string& key, bool& slot) {
    take(key, [&](const RawEntry& e) {
      if (e.value == "true" || e.value == "1") slot = true;
      else if (e.value == "false" || e.value == "0") slot = false;
      else fail(e, key, "expected true or false");
    });
  }

  void take_string(const std::string& key, std::string& slot) {
    take(key, [&](const RawEntry& e) { slot = e.value; });
  }
};

bool parse_lambda0(const std::string& text, Lambda0Policy& out, std::string& why) {
  std::istringstream ss(text);
  std::string kind;
  ss >> kind;
  auto want = [&](int n, double* a, double* b) {
    if (n >= 1 && !(ss >> *a)) return false;
    if (n >= 2 && !(ss >> *b)) return false;
    std::string rest;
    if (ss >> rest) return false;
    return true;
  };
  double a = 0.0, b = 0.0;
  if (kind == "fixed") {
    if (!want(1, &a, nullptr)) { why = "usage: fixed <value>"; return false; }
    if (!(a > 0.0)) { why = "fixed lambda0 must be > 0"; return false; }
    out = {Lambda0Policy::Kind::kFixed, a, 0.0, 0.0, 0.0};
  } else if (kind == "oracle") {
    if (!want(0, nullptr, nullptr)) { why = "usage: oracle"; return false; }
    out = {Lambda0Policy::Kind::kOracle, 1.0, 0.0, 0.0, 0.0};
  } else if (kind == "oracle_prev") {
    if (!want(0, nullptr, nullptr)) { why = "usage: oracle_prev"; return false; }
    out = {Lambda0Policy::Kind::kOraclePrev, 1.0, 0.0, 0.0, 0.0};
  } else if (kind == "oracle_deviation") {
    if (!want(1, &a, nullptr)) { why = "usage: oracle_deviation <d>"; return false; }
    if (!(a > -1.0)) { why = "deviation must be > -1"; return false; }
    out = {Lambda0Policy::Kind::kOracleDeviation, 1.0, a, 0.0, 0.0};
  } else if (kind == "oracle_deviation_range") {
    if (!want(2, &a, &b)) { why = "usage: oracle_deviation_range <lo> <hi>"; return false; }
    if (!(a > -1.0) || b < a) { why = "need -1 < lo <= hi"; return false; }
    out = {Lambda0Policy::Kind::kOracleDeviationRange, 1.0, 0.0, a, b};
  } else {
    why = "unknown lambda0 policy '" + kind + "'";
    return false;
  }
  return true;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Parser p;
  p.scan(text);
  ExperimentConfig cfg;

  auto positive = [](double v) { return v > 0.0; };

  // [data]
  p.take("data.source", [&](const RawEntry& e) {
    if (e.value == "synthetic") cfg.source = DataSource::kSynthetic;
    else if (e.value == "csv") cfg.source = DataSource::kCsv;
    else p.fail(e, "data.source", "expected synthetic or csv");
  });
  p.take_string("data.path", cfg.path);
  p.take_u64("data.data_seed", cfg.data_seed);
  p.take_int("data.episodes", cfg.synthesis.episodes,
             [](long long v) { return v >= 1; }, "must be >= 1");
  p.take_int("data.T", cfg.synthesis.T, [](long long v) { return v >= 1; },
             "must be >= 1");
  p.take("data.impressions_per_slot", [&](const RawEntry& e) {
    std::istringstream ss(e.value);
    std::string kind;
    double mean = 0.0;
    std::string rest;
    if (!(ss >> kind >> mean) || (ss >> rest) || mean < 0.0 ||
        (kind != "poisson" && kind != "fixed"))
      return p.fail(e, "data.impressions_per_slot", "usage: poisson|fixed <mean>");
    cfg.synthesis.poisson_arrivals = kind == "poisson";
    cfg.synthesis.per_slot_mean = mean;
  });
  p.take("data.value_dist", [&](const RawEntry& e) {
    std::istringstream ss(e.value);
    std::string kind;
    double a = 0.0, b = 0.0, scale = 0.0;
    std::string rest;
    if (!(ss >> kind >> a >> b >> scale) || (ss >> rest) || kind != "beta" ||
        a <= 0.0 || b <= 0.0 || scale <= 0.0)
      return p.fail(e, "data.value_dist", "usage: beta <a> <b> <scale>");
    cfg.synthesis.beta_a = a;
    cfg.synthesis.beta_b = b;
    cfg.synthesis.value_scale = scale;
  });
  p.take("data.price_dist", [&](const RawEntry& e) {
    std::istringstream ss(e.value);
    std::string kind;
    double mu = 0.0, sigma = 0.0;
    std::string rest;
    if (!(ss >> kind >> mu >> sigma) || (ss >> rest) || kind != "lognormal" ||
        sigma < 0.0)
      return p.fail(e, "data.price_dist", "usage: lognormal <mu> <sigma>");
    cfg.synthesis.price_mu = mu;
    cfg.synthesis.price_sigma = sigma;
  });
  p.take_double("data.correlation", cfg.synthesis.correlation,
                [](double v) { return v >= -1.0 && v <= 1.0; }, "must be in [-1, 1]");
  p.take("data.value_slot_profile", [&](const RawEntry& e) {
    std::istringstream ss(e.value);
    std::string kind;
    ss >> kind;
    if (kind == "flat") {
      std::string rest;
      if (ss >> rest) return p.fail(e, "data.value_slot_profile", "usage: flat");
      cfg.synthesis.value_ramp_lo = cfg.synthesis.value_ramp_hi = 1.0;
      return;
    }
    double lo = 0.0, hi = 0.0;
    std::string rest;
    if (kind != "linear" || !(ss >> lo >> hi) || (ss >> rest) || lo <= 0.0 || hi <= 0.0)
      return p.fail(e, "data.value_slot_profile", "usage: flat | linear <lo> <hi>");
    cfg.synthesis.value_ramp_lo = lo;
    cfg.synthesis.value_ramp_hi = hi;
  });
  p.take("data.volume_slot_profile", [&](const RawEntry& e) {
    std::istringstream ss(e.value);
    std::string kind;
    ss >> kind;
    if (kind == "flat") {
      std::string rest;
      if (ss >> rest) return p.fail(e, "data.volume_slot_profile", "usage: flat");
      cfg.synthesis.volume_ramp_lo = cfg.synthesis.volume_ramp_hi = 1.0;
      return;
    }
    double lo = 0.0, hi = 0.0;
    std::string rest;
    if (kind != "linear" || !(ss >> lo >> hi) || (ss >> rest) || lo <= 0.0 || hi <= 0.0)
      return p.fail(e, "data.volume_slot_profile", "usage: flat | linear <lo> <hi>");
    cfg.synthesis.volume_ramp_lo = lo;
    cfg.synthesis.volume_ramp_hi = hi;
  });
  p.take_int("data.regime_shift_slot", cfg.synthesis.regime_shift_slot,
             [](long long) { return true; }, "");
  p.take_double("data.regime_shift_scale", cfg.synthesis.regime_shift_scale, positive,
                "must be > 0");
  p.take_double("data.train_fraction", cfg.train_fraction,
                [](double v) { return v > 0.0 && v <= 1.0; }, "must be in (0, 1]");

  // [experiment]
  p.take("experiment.method", [&](const RawEntry& e) {
    if (e.value == "drlb") cfg.method = Method::kDrlb;
    else if (e.value == "flb") cfg.method = Method::kFlb;
    else if (e.value == "bslb") cfg.method = Method::kBslb;
    else p.fail(e, "experiment.method", "expected drlb, flb or bslb");
  });
  p.take_double("experiment.budget_ratio", cfg.budget_ratio,
                [](double v) { return v > 0.0 && v <= 1.0; }, "must be in (0, 1]");
  p.take("experiment.seeds", [&](const RawEntry& e) {
    std::vector<std::uint64_t> seeds;
    for (auto part : split(e.value, ',')) {
      auto v = parse_int(trim(part));
      if (!v || *v < 0)
        return p.fail(e, "experiment.seeds", "expected comma-separated non-negative integers");
      seeds.push_back(static_cast<std::uint64_t>(*v));
    }
    if (seeds.empty()) return p.fail(e, "experiment.seeds", "need at least one seed");
    cfg.seeds = std::move(seeds);
  });
  p.take_int("experiment.episodes_train", cfg.episodes_train,
             [](long long v) { return v >= 0; }, "must be >= 0");
  p.take_int("experiment.checkpoint_every", cfg.checkpoint_every,
             [](long long v) { return v >= 1; }, "must be >= 1");
  p.take("experiment.lambda0_train", [&](const RawEntry& e) {
    std::string why;
    if (!parse_lambda0(e.value, cfg.lambda0_train, why))
      p.fail(e, "experiment.lambda0_train", why);
  });
  p.take("experiment.lambda0_eval", [&](const RawEntry& e) {
    std::string why;
    if (!parse_lambda0(e.value, cfg.lambda0_eval, why))
      p.fail(e, "experiment.lambda0_eval", why);
  });
  p.take_bool("experiment.dump_store", cfg.dump_store);

  // [agent]
  p.take_double("agent.gamma", cfg.agent.gamma,
                [](double v) { return v >= 0.0 && v <= 1.0; }, "must be in [0, 1]");
  p.take_double("agent.epsilon_floor", cfg.agent.epsilon_floor,
                [](double v) { return v >= 0.0 && v <= 1.0; }, "must be in [0, 1]");
  p.take_double("agent.epsilon_cap", cfg.agent.epsilon_cap,
                [](double v) { return v >= 0.0 && v <= 1.0; }, "must be in [0, 1]");
  p.take_double("agent.adaptive_epsilon_min", cfg.agent.adaptive_epsilon_min,
                [](double v) { return v >= 0.0 && v <= 1.0; }, "must be in [0, 1]");
  p.take_double("agent.anneal_rate", cfg.agent.anneal_rate,
                [](double v) { return v >= 0.0; }, "must be >= 0");
  p.take_bool("agent.adaptive", cfg.agent.adaptive);
  p.take_int("agent.target_sync", cfg.agent.target_sync_period,
             [](long long v) { return v >= 1; }, "must be >= 1");
  p.take_size("agent.replay_capacity", cfg.agent.replay_capacity);
  p.take("agent.reward_mode", [&](const RawEntry& e) {
    if (e.value == "rewardnet") cfg.reward_mode = RewardMode::kRewardNet;
    else if (e.value == "immediate") cfg.reward_mode = RewardMode::kImmediate;
    else p.fail(e, "agent.reward_mode", "expected rewardnet or immediate");
  });

  // [network]
  p.take("network.hidden", [&](const RawEntry& e) {
    std::vector<int> hidden;
    for (auto part : split(e.value, ',')) {
      auto v = parse_int(trim(part));
      if (!v || *v < 1)
        return p.fail(e, "network.hidden", "expected comma-separated positive integers");
      hidden.push_back(static_cast<int>(*v));
    }
    if (hidden.empty()) return p.fail(e, "network.hidden", "need at least one layer");
    cfg.hidden = std::move(hidden);
  });
  p.take_double("network.learning_rate", cfg.net.learning_rate, positive, "must be > 0");
  p.take_double("network.momentum", cfg.net.momentum,
                [](double v) { return v >= 0.0 && v < 1.0; }, "must be in [0, 1)");
  p.take_int("network.batch_size", cfg.net.batch_size,
             [](long long v) { return v >= 1; }, "must be >= 1");

  // [rewardnet]
  p.take_size("rewardnet.d2_capacity", cfg.reward_net.d2_capacity);
  p.take_size("rewardnet.store_capacity", cfg.reward_net.store_capacity);
  p.take_double("rewardnet.lrfu_decay", cfg.reward_net.lrfu_decay,
                [](double v) { return v >= 0.0; }, "must be >= 0");
  p.take_double("rewardnet.key_grid", cfg.reward_net.key_grid, positive, "must be > 0");

  // [normalization]
  auto take_auto = [&](const std::string& key, bool& is_auto, double& slot) {
    p.take(key, [&, key](const RawEntry& e) {
      if (e.value == "auto") {
        is_auto = true;
        return;
      }
      auto v = parse_double(e.value);
      if (!v || !(*v > 0.0)) return p.fail(e, key, "expected auto or a positive real");
      is_auto = false;
      slot = *v;
    });
  };
  take_auto("normalization.ref_cpm", cfg.ref_cpm_auto, cfg.norms.ref_cpm);
  take_auto("normalization.ref_value", cfg.ref_value_auto, cfg.norms.ref_value);
  take_auto("normalization.reward_scale", cfg.reward_scale_auto, cfg.reward_scale);

  // [baseline]
  p.take_double("baseline.delta_min", cfg.delta_min, positive, "must be > 0");
  p.take_double("baseline.delta_max", cfg.delta_max, positive, "must be > 0");

  for (const auto& [key, entry] : p.entries)
    p.errors.push_back("line " + std::to_string(entry.line) + ": unknown key '" + key + "'");

  // Cross-field checks.
  if (cfg.source == DataSource::kCsv && cfg.path.empty())
    p.errors.push_back("data.path is required when data.source = csv");
  if (cfg.agent.epsilon_floor > cfg.agent.epsilon_cap)
    p.errors.push_back("agent.epsilon_floor must not exceed agent.epsilon_cap");
  if (cfg.delta_min >= cfg.delta_max)
    p.errors.push_back("baseline.delta_min must be < baseline.delta_max");

  if (!p.errors.empty()) throw ConfigError(std::move(p.errors));
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_string(const Lambda0Policy& po) {
  switch (po.kind) {
    case Lambda0Policy::Kind::kFixed:
      return "fixed " + dtos(po.value);
    case Lambda0Policy::Kind::kOracle:
      return "oracle";
    case Lambda0Policy::Kind::kOraclePrev:
      return "oracle_prev";
    case Lambda0Policy::Kind::kOracleDeviation:
      return "oracle_deviation " + dtos(po.deviation);
    case Lambda0Policy::Kind::kOracleDeviationRange:
      return "oracle_deviation_range " + dtos(po.dev_lo) + " " + dtos(po.dev_hi);
  }
  return "";
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kDrlb: return "drlb";
    case Method::kFlb: return "flb";
    case Method::kBslb: return "bslb";
  }
  return "";
}

std::string write_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[data]\n";
  out << "source = " << (cfg.source == DataSource::kSynthetic ? "synthetic" : "csv") << '\n';
  if (!cfg.path.empty()) out << "path = " << cfg.path << '\n';
  out << "data_seed = " << cfg.data_seed << '\n';
  out << "episodes = " << cfg.synthesis.episodes << '\n';
  out << "T = " << cfg.synthesis.T << '\n';
  out << "impressions_per_slot = " << (cfg.synthesis.poisson_arrivals ? "poisson " : "fixed ")
      << dtos(cfg.synthesis.per_slot_mean) << '\n';
  out << "value_dist = beta " << dtos(cfg.synthesis.beta_a) << ' '
      << dtos(cfg.synthesis.beta_b) << ' ' << dtos(cfg.synthesis.value_scale) << '\n';
  out << "price_dist = lognormal " << dtos(cfg.synthesis.price_mu) << ' '
      << dtos(cfg.synthesis.price_sigma) << '\n';
  out << "correlation = " << dtos(cfg.synthesis.correlation) << '\n';
  out << "value_slot_profile = linear " << dtos(cfg.synthesis.value_ramp_lo) << ' '
      << dtos(cfg.synthesis.value_ramp_hi) << '\n';
  out << "volume_slot_profile = linear " << dtos(cfg.synthesis.volume_ramp_lo) << ' '
      << dtos(cfg.synthesis.volume_ramp_hi) << '\n';
  out << "regime_shift_slot = " << cfg.synthesis.regime_shift_slot << '\n';
  out << "regime_shift_scale = " << dtos(cfg.synthesis.regime_shift_scale) << '\n';
  out << "train_fraction = " << dtos(cfg.train_fraction) << '\n';
  out << "\n[experiment]\n";
  out << "method = " << to_string(cfg.method) << '\n';
  out << "budget_ratio = " << dtos(cfg.budget_ratio) << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
    out << (i ? "," : "") << cfg.seeds[i];
  out << '\n';
  out << "episodes_train = " << cfg.episodes_train << '\n';
  out << "checkpoint_every = " << cfg.checkpoint_every << '\n';
  out << "lambda0_train = " << to_string(cfg.lambda0_train) << '\n';
  out << "lambda0_eval = " << to_string(cfg.lambda0_eval) << '\n';
  out << "dump_store = " << (cfg.dump_store ? "true" : "false") << '\n';
  out << "\n[agent]\n";
  out << "gamma = " << dtos(cfg.agent.gamma) << '\n';
  out << "epsilon_floor = " << dtos(cfg.agent.epsilon_floor) << '\n';
  out << "epsilon_cap = " << dtos(cfg.agent.epsilon_cap) << '\n';
  out << "adaptive_epsilon_min = " << dtos(cfg.agent.adaptive_epsilon_min) << '\n';
  out << "anneal_rate = " << dtos(cfg.agent.anneal_rate) << '\n';
  out << "adaptive = " << (cfg.agent.adaptive ? "true" : "false") << '\n';
  out << "target_sync = " << cfg.agent.target_sync_period << '\n';
  out << "replay_capacity = " << cfg.agent.replay_capacity << '\n';
  out << "reward_mode = "
      << (cfg.reward_mode == RewardMode::kRewardNet ? "rewardnet" : "immediate") << '\n';
  out << "\n[network]\n";
  out << "hidden = ";
  for (std::size_t i = 0; i < cfg.hidden.size(); ++i)
    out << (i ? "," : "") << cfg.hidden[i];
  out << '\n';
  out << "learning_rate = " << dtos(cfg.net.learning_rate) << '\n';
  out << "momentum = " << dtos(cfg.net.momentum) << '\n';
  out << "batch_size = " << cfg.net.batch_size << '\n';
  out << "\n[rewardnet]\n";
  out << "d2_capacity = " << cfg.reward_net.d2_capacity << '\n';
  out << "store_capacity = " << cfg.reward_net.store_capacity << '\n';
  out << "lrfu_decay = " << dtos(cfg.reward_net.lrfu_decay) << '\n';
  out << "key_grid = " << dtos(cfg.reward_net.key_grid) << '\n';
  out << "\n[normalization]\n";
  out << "ref_cpm = " << (cfg.ref_cpm_auto ? "auto" : dtos(cfg.norms.ref_cpm)) << '\n';
  out << "ref_value = " << (cfg.ref_value_auto ? "auto" : dtos(cfg.norms.ref_value)) << '\n';
  out << "reward_scale = " << (cfg.reward_scale_auto ? "auto" : dtos(cfg.reward_scale)) << '\n';
  out << "\n[baseline]\n";
  out << "delta_min = " << dtos(cfg.delta_min) << '\n';
  out << "delta_max = " << dtos(cfg.delta_max) << '\n';
  return out.str();
}

}  // namespace drlb
