#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace oatsq {

/// Complex number in extended-range polar form (log-magnitude, argument).
///
/// Moments of the twisted state involve factors like |R|^(2S-1) that
/// underflow binary64 long before they stop mattering, so all transverse
/// moments are carried as (log|z|, arg z).  The argument is kept as an
/// unbounded winding angle, never folded back into (-pi, pi]: phase
/// differences between moments stay exact even when the magnitudes have
/// underflowed to zero as plain doubles.
///
/// An exact zero is encoded as log_mag = -infinity.
struct PolarComplex {
  double log_mag = -std::numeric_limits<double>::infinity();
  double arg = 0.0;

  static PolarComplex zero() { return {}; }

  static PolarComplex from_polar(double log_mag, double arg) {
    return {log_mag, arg};
  }

  static PolarComplex from_cartesian(std::complex<double> z) {
    const double m = std::abs(z);
    if (m == 0.0) return zero();
    return {std::log(m), std::arg(z)};
  }

  /// Magnitudes below 1e-300 compare as zero.
  bool is_zero() const { return log_mag < -690.7755278982137; }

  double magnitude() const { return std::exp(log_mag); }

  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(magnitude(), arg);
  }

  PolarComplex pow(double k) const {
    if (is_zero()) return zero();
    return {k * log_mag, k * arg};
  }

  PolarComplex operator*(const PolarComplex& rhs) const {
    if (is_zero() || rhs.is_zero()) return zero();
    return {log_mag + rhs.log_mag, arg + rhs.arg};
  }

  /// Multiply by e^{dlog} (a positive real scale given in log space).
  PolarComplex scaled_by_log(double dlog) const {
    if (is_zero()) return zero();
    return {log_mag + dlog, arg};
  }

  /// Multiply by e^{i dphi}.
  PolarComplex rotated(double dphi) const {
    if (is_zero()) return zero();
    return {log_mag, arg + dphi};
  }
};

}  // namespace oatsq
