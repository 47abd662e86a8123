#pragma once

#include <cstdint>

namespace oatsq {

/// splitmix64: tiny deterministic generator for seeded cross-check draws.
/// The output sequence is fixed by the algorithm alone, so seeded runs are
/// reproducible across platforms and standard-library versions (the
/// distributions in <random> make no such promise).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

  /// Uniform half-integer spin in [lo, hi] (inclusive, both half-integers).
  double half_integer_spin(double lo, double hi) {
    const auto n_lo = static_cast<long>(2.0 * lo);
    const auto n_hi = static_cast<long>(2.0 * hi);
    const auto span = static_cast<std::uint64_t>(n_hi - n_lo + 1);
    return 0.5 * static_cast<double>(n_lo + static_cast<long>(next() % span));
  }

 private:
  std::uint64_t state_;
};

}  // namespace oatsq
