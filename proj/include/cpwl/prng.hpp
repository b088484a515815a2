#pragma once
// Tiny deterministic generator (splitmix64). Seeded sampling must be
// reproducible across platforms, so no <random> distributions.

#include <cstdint>

#include "cpwl/rational.hpp"

namespace cpwl {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [lo, hi].
  long long next_int(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  /// Rational with numerator in [-height, height] and denominator in [1, height].
  Rat next_rat(int height) {
    long long num = next_int(-height, height);
    long long den = next_int(1, height);
    return Rat(num, den);
  }

 private:
  std::uint64_t state_;
};

}  // namespace cpwl
