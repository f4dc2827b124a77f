#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace drlb {

// Seeded random source with hand-rolled samplers. The std:: distribution
// classes are implementation-defined, which would tie reproducibility to a
// particular standard library; everything here is pinned to mt19937_64
// output so a (config, seed) pair replays identically everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n).
  int uniform_int(int n) {
    return static_cast<int>(static_cast<double>(n) * uniform01());
  }

  // Standard normal via Box-Muller; draws two uniforms per call.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Knuth's product method; fine for the small means used here.
  int poisson(double mean) {
    const double limit = std::exp(-mean);
    double prod = uniform01();
    int n = 0;
    while (prod > limit) {
      ++n;
      prod *= uniform01();
    }
    return n;
  }

  // Derive an independent child seed; advances this stream.
  std::uint64_t fork_seed() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace drlb
