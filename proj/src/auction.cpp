#include "drlb/auction.hpp"

#include <stdexcept>

namespace drlb {

double EpisodeData::total_market_cost() const {
  double sum = 0.0;
  for (const auto& im : impressions) sum += im.market_price;
  return sum;
}

double EpisodeData::total_value() const {
  double sum = 0.0;
  for (const auto& im : impressions) sum += im.value;
  return sum;
}

void validate_episode(const EpisodeData& data) {
  if (data.T < 1) throw std::invalid_argument("episode T must be >= 1");
  int prev_slot = 0;
  for (std::size_t i = 0; i < data.impressions.size(); ++i) {
    const auto& im = data.impressions[i];
    if (im.slot < 0 || im.slot >= data.T)
      throw std::invalid_argument("impression slot out of [0, T)");
    if (im.slot < prev_slot)
      throw std::invalid_argument("impressions not sorted by slot");
    if (im.value < 0.0) throw std::invalid_argument("impression value < 0");
    if (im.market_price < 0.0) throw std::invalid_argument("market_price < 0");
    prev_slot = im.slot;
  }
}

AuctionEnv::AuctionEnv(std::shared_ptr<const EpisodeData> data)
    : data_(std::move(data)) {
  if (!data_) throw std::invalid_argument("null episode data");
  validate_episode(*data_);
  slot_ranges_.assign(static_cast<std::size_t>(data_->T), {0, 0});
  std::size_t i = 0;
  const auto& imps = data_->impressions;
  for (int t = 0; t < data_->T; ++t) {
    const std::size_t begin = i;
    while (i < imps.size() && imps[i].slot == t) ++i;
    slot_ranges_[static_cast<std::size_t>(t)] = {begin, i};
  }
}

EnvState AuctionEnv::reset(double budget, double lambda0) {
  if (!(budget > 0.0)) throw std::invalid_argument("budget must be > 0");
  if (!(lambda0 > 0.0)) throw std::invalid_argument("lambda0 must be > 0");
  state_ = EnvState{};
  state_.budget_total = budget;
  state_.budget_left = budget;
  state_.lambda = lambda0;
  return state_;
}

StepOutcome AuctionEnv::step(double lambda_new) {
  if (state_.terminal) throw std::logic_error("step on terminal episode");
  if (!(lambda_new > 0.0)) throw std::invalid_argument("lambda must be > 0");

  state_.lambda = lambda_new;
  StepOutcome out;
  const auto [begin, end] = slot_ranges_[static_cast<std::size_t>(state_.t)];
  for (std::size_t i = begin; i < end; ++i) {
    const auto& im = data_->impressions[i];
    ++out.auctions;
    const double bid = im.value / lambda_new;
    if (bid > im.market_price && im.market_price <= state_.budget_left) {
      state_.budget_left -= im.market_price;
      out.reward += im.value;
      out.cost += im.market_price;
      ++out.wins;
    }
  }
  out.cpm = out.wins > 0 ? out.cost / out.wins * 1000.0 : 0.0;
  out.win_rate = out.auctions > 0
                     ? static_cast<double>(out.wins) / out.auctions
                     : 0.0;
  state_.cumulative_value += out.reward;
  ++state_.t;
  if (state_.t >= data_->T || state_.budget_left == 0.0) state_.terminal = true;
  return out;
}

}  // namespace drlb
