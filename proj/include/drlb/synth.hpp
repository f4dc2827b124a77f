#pragma once

#include <cstdint>
#include <vector>

#include "drlb/auction.hpp"

namespace drlb {

// Seeded synthetic impression streams. Values follow a scaled Beta(a, b)
// (pCTR-like), market prices a log-normal; the `correlation` knob is a
// Spearman rank correlation between the two, induced through a Gaussian
// copula. A linear slot ramp on values shifts where the valuable inventory
// arrives, and an optional regime shift rescales prices from a given slot on.
struct SynthesisSpec {
  int episodes = 10;
  int T = 96;
  bool poisson_arrivals = true;
  double per_slot_mean = 10.0;  // fixed count when poisson_arrivals is false
  double beta_a = 2.0;
  double beta_b = 50.0;
  double value_scale = 1.0;
  double price_mu = -3.0;     // log-space mean
  double price_sigma = 0.5;   // log-space stddev
  double correlation = 0.0;   // Spearman, in [-1, 1]
  double value_ramp_lo = 1.0;  // value multiplier at slot 0
  double value_ramp_hi = 1.0;  // value multiplier at slot T-1
  double volume_ramp_lo = 1.0; // arrival-rate multiplier at slot 0
  double volume_ramp_hi = 1.0; // arrival-rate multiplier at slot T-1
  int regime_shift_slot = -1; // < 0 disables
  double regime_shift_scale = 1.0;
};

// Throws std::invalid_argument on bad parameters.
void validate_spec(const SynthesisSpec& spec);

std::vector<EpisodeData> generate_synthetic(const SynthesisSpec& spec,
                                            std::uint64_t seed);

}  // namespace drlb
