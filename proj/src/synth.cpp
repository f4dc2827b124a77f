#include "drlb/synth.hpp"

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "drlb/rng.hpp"

namespace drlb {

void validate_spec(const SynthesisSpec& spec) {
  if (spec.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (spec.T < 1) throw std::invalid_argument("T must be >= 1");
  if (!(spec.per_slot_mean >= 0.0))
    throw std::invalid_argument("impressions per slot must be >= 0");
  if (!(spec.beta_a > 0.0) || !(spec.beta_b > 0.0))
    throw std::invalid_argument("beta parameters must be > 0");
  if (!(spec.value_scale > 0.0))
    throw std::invalid_argument("value scale must be > 0");
  if (!(spec.price_sigma >= 0.0))
    throw std::invalid_argument("price sigma must be >= 0");
  if (spec.correlation < -1.0 || spec.correlation > 1.0)
    throw std::invalid_argument("correlation must be in [-1, 1]");
  if (!(spec.value_ramp_lo > 0.0) || !(spec.value_ramp_hi > 0.0))
    throw std::invalid_argument("value ramp must be > 0");
  if (!(spec.volume_ramp_lo > 0.0) || !(spec.volume_ramp_hi > 0.0))
    throw std::invalid_argument("volume ramp must be > 0");
  if (spec.regime_shift_slot >= 0 && !(spec.regime_shift_scale > 0.0))
    throw std::invalid_argument("regime shift scale must be > 0");
}

namespace {

double normal_cdf(double z) { return 0.5 * std::erfc(-z * 0.70710678118654752440); }

}  // namespace

std::vector<EpisodeData> generate_synthetic(const SynthesisSpec& spec,
                                            std::uint64_t seed) {
  validate_spec(spec);
  Rng rng(seed);
  // Gaussian-copula correlation that lands the requested Spearman rank
  // correlation on the transformed marginals.
  const double rho_z = 2.0 * std::sin(3.14159265358979323846 * spec.correlation / 6.0);
  const double rho_ortho = std::sqrt(std::max(0.0, 1.0 - rho_z * rho_z));

  std::vector<EpisodeData> episodes;
  episodes.reserve(static_cast<std::size_t>(spec.episodes));
  for (int e = 0; e < spec.episodes; ++e) {
    EpisodeData data;
    char id[32];
    std::snprintf(id, sizeof(id), "synth-%04d", e);
    data.episode_id = id;
    data.T = spec.T;
    for (int t = 0; t < spec.T; ++t) {
      const double frac = spec.T > 1 ? static_cast<double>(t) / (spec.T - 1) : 0.0;
      const double volume_ramp =
          spec.volume_ramp_lo + (spec.volume_ramp_hi - spec.volume_ramp_lo) * frac;
      const double arrivals = spec.per_slot_mean * volume_ramp;
      const int count = spec.poisson_arrivals ? rng.poisson(arrivals)
                                              : static_cast<int>(arrivals);
      const double ramp =
          spec.value_ramp_lo + (spec.value_ramp_hi - spec.value_ramp_lo) * frac;
      const double price_scale =
          (spec.regime_shift_slot >= 0 && t >= spec.regime_shift_slot)
              ? spec.regime_shift_scale
              : 1.0;
      for (int i = 0; i < count; ++i) {
        const double z_value = rng.normal();
        const double z_price = rho_z * z_value + rho_ortho * rng.normal();
        double u = normal_cdf(z_value);
        u = std::min(std::max(u, 1e-12), 1.0 - 1e-12);
        Impression im;
        im.slot = t;
        im.value = spec.value_scale * ramp *
                   boost::math::ibeta_inv(spec.beta_a, spec.beta_b, u);
        im.market_price =
            price_scale * std::exp(spec.price_mu + spec.price_sigma * z_price);
        data.impressions.push_back(im);
      }
    }
    episodes.push_back(std::move(data));
  }
  return episodes;
}

}  // namespace drlb
