#pragma once

#include <memory>
#include <tuple>
#include <vector>

#include "drlb/agent.hpp"
#include "drlb/auction.hpp"
#include "drlb/oracle.hpp"
#include "drlb/rng.hpp"

namespace drlb::test {

inline std::shared_ptr<EpisodeData> make_episode(
    const std::vector<std::tuple<int, double, double>>& rows, int T,
    const std::string& id = "ep") {
  auto data = std::make_shared<EpisodeData>();
  data->episode_id = id;
  data->T = T;
  for (const auto& [slot, value, price] : rows) {
    Impression im;
    im.slot = slot;
    im.value = value;
    im.market_price = price;
    data->impressions.push_back(im);
  }
  return data;
}

inline std::vector<Impression> make_impressions(
    const std::vector<std::pair<double, double>>& rows) {
  std::vector<Impression> out;
  for (const auto& [value, price] : rows) {
    Impression im;
    im.value = value;
    im.market_price = price;
    out.push_back(im);
  }
  return out;
}

// Contiguous-slot random episode with continuous values and prices.
inline std::shared_ptr<EpisodeData> random_episode(Rng& rng, int T,
                                                   int max_per_slot) {
  auto data = std::make_shared<EpisodeData>();
  data->episode_id = "random";
  data->T = T;
  for (int t = 0; t < T; ++t) {
    const int count = rng.uniform_int(max_per_slot + 1);
    for (int i = 0; i < count; ++i) {
      Impression im;
      im.slot = t;
      im.value = rng.uniform(0.001, 1.0);
      im.market_price = rng.uniform(0.001, 1.0);
      data->impressions.push_back(im);
    }
  }
  return data;
}

// Total value won when bidding a constant lambda through the environment.
inline double replay_fixed_lambda(std::shared_ptr<const EpisodeData> data,
                                  double budget, double lambda) {
  AuctionEnv env(std::move(data));
  env.reset(budget, lambda);
  while (!env.is_terminal()) env.step(lambda);
  return env.state().cumulative_value;
}

}  // namespace drlb::test
