#include "oatsq/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oatsq {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonHalfIntegerSpin: return "NonHalfIntegerSpin";
    case ErrorCode::NegativeGamma: return "NegativeGamma";
    case ErrorCode::AngleOutOfRange: return "AngleOutOfRange";
    case ErrorCode::SpinTooLargeForDense: return "SpinTooLargeForDense";
    case ErrorCode::MomentOrderOutOfRange: return "MomentOrderOutOfRange";
    case ErrorCode::VanishingMeanSpin: return "VanishingMeanSpin";
    case ErrorCode::NegativeVariance: return "NegativeVariance";
    case ErrorCode::PoleState: return "PoleState";
    case ErrorCode::ZeroTime: return "ZeroTime";
    case ErrorCode::NonpositiveGamma: return "NonpositiveGamma";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NoMinimumFound: return "NoMinimumFound";
    case ErrorCode::EmptyGrid: return "EmptyGrid";
    case ErrorCode::NonpositiveData: return "NonpositiveData";
    case ErrorCode::FitDegenerate: return "FitDegenerate";
  }
  return "UnknownError";
}

InitialState InitialState::make(double theta0, double phi0) {
  double wrapped = std::fmod(phi0, kTwoPi);
  if (wrapped < 0.0) wrapped += kTwoPi;
  return {theta0, wrapped};
}

bool is_half_integer_spin(double spin) {
  if (!std::isfinite(spin) || spin < 0.5) return false;
  const double doubled = 2.0 * spin;
  return doubled == std::floor(doubled);
}

void validate_params(const ModelParams& params, const InitialState& init) {
  if (!is_half_integer_spin(params.spin)) {
    std::ostringstream msg;
    msg << "total spin must be a half-integer >= 1/2, got " << params.spin;
    throw Error(ErrorCode::NonHalfIntegerSpin, "spin", msg.str());
  }
  if (!std::isfinite(params.gamma) || params.gamma < 0.0) {
    std::ostringstream msg;
    msg << "dephasing rate must be finite and >= 0, got " << params.gamma;
    throw Error(ErrorCode::NegativeGamma, "gamma", msg.str());
  }
  if (!std::isfinite(init.theta0) || init.theta0 < 0.0 ||
      init.theta0 > std::numbers::pi) {
    std::ostringstream msg;
    msg << "theta0 must lie in [0, pi], got " << init.theta0;
    throw Error(ErrorCode::AngleOutOfRange, "theta0", msg.str());
  }
  if (!std::isfinite(init.phi0)) {
    throw Error(ErrorCode::AngleOutOfRange, "phi0", "phi0 must be finite");
  }
}

std::complex<double> CssAmplitudes::at_m(double m) const {
  const int j = static_cast<int>(std::llround(m + spin));
  return c.at(static_cast<size_t>(j));
}

CssAmplitudes css_amplitudes(double spin, const InitialState& init,
                             int dense_cap) {
  const int n = static_cast<int>(std::llround(2.0 * spin));
  if (n + 1 > dense_cap) {
    std::ostringstream msg;
    msg << "2S+1 = " << (n + 1) << " exceeds the dense cap " << dense_cap;
    throw Error(ErrorCode::SpinTooLargeForDense, "spin", msg.str());
  }

  const double half = 0.5 * init.theta0;
  const double c_half = std::cos(half);
  const double s_half = std::sin(half);
  const double log_c = c_half > 0.0 ? std::log(c_half) : 0.0;
  const double log_s = s_half > 0.0 ? std::log(s_half) : 0.0;
  const double lg_n1 = std::lgamma(n + 1.0);

  CssAmplitudes amps;
  amps.spin = spin;
  amps.c.resize(static_cast<size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) {
    // c[j] corresponds to m = j - S: cos exponent S+m = j, sin exponent 2S-j.
    if ((j > 0 && c_half == 0.0) || (j < n && s_half == 0.0)) {
      amps.c[j] = 0.0;
      continue;
    }
    const double log_binom =
        0.5 * (lg_n1 - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0));
    const double log_mag = log_binom + j * log_c + (n - j) * log_s;
    amps.c[j] = std::polar(std::exp(log_mag), (n - j) * init.phi0);
  }
  return amps;
}

}  // namespace oatsq
