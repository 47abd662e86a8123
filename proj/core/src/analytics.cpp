#include "oatsq/analytics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oatsq {

namespace {

constexpr double kHalfPiTol = 1e-6;  // theta0 ~ pi/2 detection for boundaries

void require_transverse(const InitialState& init, const char* op) {
  if (init.sin_theta0() == 0.0) {
    std::ostringstream msg;
    msg << op << " is undefined for a pole state (sin theta0 = 0)";
    throw Error(ErrorCode::PoleState, "theta0", msg.str());
  }
}

void require_positive_time(double tau) {
  if (!(tau > 0.0)) {
    throw Error(ErrorCode::ZeroTime, "tau", "tau must be > 0");
  }
}

void require_positive_gamma(double gamma) {
  if (!(gamma > 0.0)) {
    throw Error(ErrorCode::NonpositiveGamma, "gamma", "gamma must be > 0");
  }
}

// 1 + 9 S sin^2(theta0) cos^2(theta0), the curvature factor shared by all
// the short-time optimum formulas.
double curvature_factor(double spin, const InitialState& init) {
  const double s0 = init.sin_theta0();
  const double c0 = init.cos_theta0();
  return 1.0 + 9.0 * spin * s0 * s0 * c0 * c0;
}

}  // namespace

const char* to_string(RegimeKind kind) noexcept {
  switch (kind) {
    case RegimeKind::Negligible: return "negligible";
    case RegimeKind::Moderate: return "moderate";
    case RegimeKind::Strong: return "strong";
  }
  return "unknown";
}

double decay_exponent(double spin, const InitialState& init, double gamma,
                      double tau) {
  const double s0 = init.sin_theta0();
  return spin * tau * tau * s0 * s0 + gamma * tau;
}

double coherence_time(double spin, const InitialState& init) {
  require_transverse(init, "coherence_time");
  return 1.0 / (std::sqrt(spin) * init.sin_theta0());
}

double xi2_short_time(double spin, const InitialState& init, double gamma,
                      double tau, bool include_dropped_term) {
  require_transverse(init, "xi2_short_time");
  require_positive_time(tau);
  const double s0 = init.sin_theta0();
  const double c0 = init.cos_theta0();
  const double b = decay_exponent(spin, init, gamma, tau);
  double xi2 = gamma * tau / b + 1.0 / (4.0 * spin * b * s0 * s0) +
               (2.0 / 3.0) * b * b * curvature_factor(spin, init);
  if (include_dropped_term) {
    // Remainder of the variance-product expansion, normally omitted.
    xi2 += 1.5 * c0 * c0 * b * (1.0 - 5.0 * b / 3.0);
  }
  return xi2;
}

double xi2_no_dephasing(double spin, const InitialState& init, double tau) {
  require_transverse(init, "xi2_no_dephasing");
  require_positive_time(tau);
  const double s0 = init.sin_theta0();
  const double b = decay_exponent(spin, init, 0.0, tau);
  return 1.0 / (4.0 * spin * b * s0 * s0) +
         (2.0 / 3.0) * b * b * curvature_factor(spin, init);
}

double xi2_moderate(double spin, const InitialState& init, double gamma,
                    double tau) {
  require_transverse(init, "xi2_moderate");
  require_positive_time(tau);
  const double s0 = init.sin_theta0();
  const double b = spin * tau * tau * s0 * s0;  // gamma tau dropped from beta
  return gamma * tau / b + (2.0 / 3.0) * b * b * curvature_factor(spin, init);
}

double xi2_strong(double spin, const InitialState& init, double gamma,
                  double tau) {
  const double b = gamma * tau;
  return 1.0 + (2.0 / 3.0) * b * b * curvature_factor(spin, init);
}

double tau_min_weak(double spin, const InitialState& init) {
  require_transverse(init, "tau_min_weak");
  const double s0 = init.sin_theta0();
  const double twist = 2.0 * spin * s0 * s0;
  return std::pow(3.0, 1.0 / 6.0) * std::pow(twist, -2.0 / 3.0) /
         std::pow(curvature_factor(spin, init), 1.0 / 6.0);
}

double xi2_min_weak(double spin, const InitialState& init) {
  require_transverse(init, "xi2_min_weak");
  const double s0 = init.sin_theta0();
  const double s2 = s0 * s0;
  return 0.75 * std::cbrt(2.0 * curvature_factor(spin, init) /
                          (3.0 * spin * spin * s2 * s2));
}

double tau_min_moderate(double spin, const InitialState& init, double gamma) {
  require_transverse(init, "tau_min_moderate");
  require_positive_gamma(gamma);
  const double s0 = init.sin_theta0();
  const double s6 = std::pow(s0, 6.0);
  return std::pow(3.0 * gamma, 0.2) *
         std::pow(8.0 * spin * spin * spin * s6, -0.2) /
         std::pow(curvature_factor(spin, init), 0.2);
}

double xi2_min_moderate(double spin, const InitialState& init, double gamma) {
  require_transverse(init, "xi2_min_moderate");
  require_positive_gamma(gamma);
  const double s0 = init.sin_theta0();
  const double s2 = s0 * s0;
  const double g4 = gamma * gamma * gamma * gamma;
  return 1.25 * std::pow(8.0 * g4 * curvature_factor(spin, init) /
                             (3.0 * spin * spin * s2 * s2),
                         0.2);
}

Regime classify_regime(double spin, const InitialState& init, double gamma) {
  const bool equatorial =
      std::abs(init.theta0 - 0.5 * std::numbers::pi) < kHalfPiTol;
  Regime regime;
  regime.lower_exponent = equatorial ? -0.5 : -1.0 / 3.0;
  regime.upper_exponent = equatorial ? 0.5 : 0.25;
  const double lower = std::pow(spin, regime.lower_exponent);
  const double upper = std::pow(spin, regime.upper_exponent);
  if (gamma < lower) {
    regime.kind = RegimeKind::Negligible;
  } else if (gamma < upper) {
    regime.kind = RegimeKind::Moderate;
  } else {
    regime.kind = RegimeKind::Strong;
  }
  return regime;
}

AnalyticPrediction predict_optimum(const ModelParams& params,
                                   const InitialState& init) {
  AnalyticPrediction prediction;
  prediction.regime = classify_regime(params.spin, init, params.gamma);
  if (prediction.regime.kind == RegimeKind::Negligible ||
      params.gamma <= 0.0) {
    prediction.tau_min = tau_min_weak(params.spin, init);
    prediction.xi2_min = xi2_min_weak(params.spin, init);
    prediction.formula = "weak-dephasing optimum";
  } else {
    prediction.tau_min = tau_min_moderate(params.spin, init, params.gamma);
    prediction.xi2_min = xi2_min_moderate(params.spin, init, params.gamma);
    prediction.formula = "moderate-dephasing optimum";
  }
  return prediction;
}

Observables approx_observables(double spin, const InitialState& init,
                               double gamma, double tau) {
  const double s0 = init.sin_theta0();
  const double c0 = init.cos_theta0();
  const double b = decay_exponent(spin, init, gamma, tau);
  const double phi = init.phi0 + 2.0 * spin * tau * c0;

  Observables obs;
  obs.tau = tau;
  obs.sz = expect_sz(spin, init);
  obs.sz2 = expect_sz2(spin, init);
  if (s0 == 0.0) return obs;  // transverse moments vanish at the poles

  obs.splus = PolarComplex::from_polar(std::log(spin * s0) - b, phi);
  if (spin > 0.5) {
    obs.splus2 = PolarComplex::from_polar(
        std::log(spin * (spin - 0.5) * s0 * s0) - 4.0 * b, 2.0 * phi);
    const PolarComplex bracket = PolarComplex::from_cartesian({c0, tau});
    obs.splus_z =
        bracket
            .scaled_by_log(std::log(2.0 * spin * (spin - 0.5) * s0) - b)
            .rotated(phi);
  }
  return obs;
}

}  // namespace oatsq
