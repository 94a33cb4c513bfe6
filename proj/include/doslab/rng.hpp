#pragma once

#include <cmath>
#include <cstdint>

namespace doslab {

/// Counter-based deterministic generator. Draw i of stream `seed` is
/// mix64(seed + (i+1)*0x9E3779B97F4A7C15), the SplitMix64 output function
/// applied to a Weyl sequence. Identical (seed, draw index) gives identical
/// output on every platform, and streams can be split by re-seeding with any
/// previously drawn value.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed) : seed_(seed) {}

  uint64_t next_u64() {
    uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// uniform in [0, 1) with 53 random bits
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// uniform integer in [0, n)
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  /// standard normal via Box-Muller (always burns two uniforms)
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 < 0x1.0p-60) u1 = 0x1.0p-60;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  /// child stream, decorrelated from this one
  CounterRng split() { return CounterRng(next_u64()); }

 private:
  uint64_t seed_;
  uint64_t counter_ = 0;
};

}  // namespace doslab
