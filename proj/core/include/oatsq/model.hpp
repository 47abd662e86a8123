#pragma once

#include <complex>
#include <vector>

#include "oatsq/errors.hpp"

namespace oatsq {

/// Largest allowed dense dimension 2S+1 for the brute-force oracle.
inline constexpr int kDefaultDenseCap = 4097;

/// Collective-spin model parameters.  The spin S = N/2 is half-integer;
/// gamma is the dephasing rate in units of the twisting strength.  Time
/// enters everywhere as the dimensionless tau = chi*t, passed separately.
struct ModelParams {
  double spin = 0.5;
  double gamma = 0.0;
};

/// Orientation (theta0, phi0) of the initial coherent spin state.
struct InitialState {
  double theta0 = 0.0;
  double phi0 = 0.0;

  /// Normalizes phi0 into [0, 2*pi).  theta0 is kept as given and
  /// range-checked by validate_params.
  static InitialState make(double theta0, double phi0);

  double sin_theta0() const { return std::sin(theta0); }
  double cos_theta0() const { return std::cos(theta0); }
};

/// Dicke-basis amplitudes of a coherent spin state.  c[j] holds c_m for
/// m = j - S, j = 0 .. 2S (i.e. the vector is indexed from m = -S up to S).
struct CssAmplitudes {
  double spin = 0.5;
  std::vector<std::complex<double>> c;

  int dim() const { return static_cast<int>(c.size()); }
  std::complex<double> at_m(double m) const;
};

/// Checks all type invariants; throws Error naming the violated field.
void validate_params(const ModelParams& params, const InitialState& init);

/// True iff 2*spin is a non-negative integer and spin >= 1/2.
bool is_half_integer_spin(double spin);

/// Amplitudes c_m = binom(2S, S+m)^{1/2} cos(t0/2)^{S+m} sin(t0/2)^{S-m}
/// e^{i(S-m)phi0}.  Binomials are evaluated through lgamma so the result
/// stays finite for any spin the dense cap admits.
CssAmplitudes css_amplitudes(double spin, const InitialState& init,
                             int dense_cap = kDefaultDenseCap);

}  // namespace oatsq
