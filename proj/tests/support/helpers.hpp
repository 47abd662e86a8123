#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "oatsq/random.hpp"

namespace test_support {

// Relative deviation with a small-magnitude floor (matching zeros).
inline double rel_dev(std::complex<double> a, std::complex<double> b,
                      double floor = 1e-13) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale <= floor) return 0.0;
  return std::abs(a - b) / scale;
}

inline double rel_dev(double a, double b, double floor = 1e-13) {
  return rel_dev(std::complex<double>(a, 0.0), std::complex<double>(b, 0.0),
                 floor);
}

using Rng = oatsq::SplitMix64;

}  // namespace test_support
