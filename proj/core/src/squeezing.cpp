#include "oatsq/squeezing.hpp"

#include <cmath>
#include <sstream>

namespace oatsq {

FrameAngles frame_angles(const Observables& obs, double spin,
                         const FrameOptions& options) {
  const double splus_mag = obs.splus.is_zero() ? 0.0 : obs.splus.magnitude();
  const double norm = std::hypot(obs.sz, splus_mag);
  if (!(norm > options.eps_norm_rel * spin)) {
    std::ostringstream msg;
    msg << "|<S>| = " << norm << " below " << options.eps_norm_rel * spin
        << " at tau = " << obs.tau;
    throw Error(ErrorCode::VanishingMeanSpin, "spin_norm", msg.str());
  }

  FrameAngles frame;
  frame.spin_norm = norm;
  frame.sin_theta = splus_mag / norm;
  frame.cos_theta = obs.sz / norm;
  frame.theta = std::atan2(splus_mag, obs.sz);
  frame.degenerate = splus_mag < options.eps_frame_rel * spin;
  frame.phi = frame.degenerate ? options.phi_fallback : obs.splus.arg;
  return frame;
}

VarianceCoeffs variance_coeffs(const Observables& obs,
                               const FrameAngles& frame, double spin) {
  const double st = frame.sin_theta;
  const double ct = frame.cos_theta;

  // Rotated moments p = <S_+^2> e^{-2i phi}, d = <S_+(2S_z+1)> e^{-i phi}.
  // The angle differences are formed in polar form, so they stay accurate
  // even when the magnitudes are far below double range.
  const double p_mag = obs.splus2.is_zero() ? 0.0 : obs.splus2.magnitude();
  const double p_ang = obs.splus2.arg - 2.0 * frame.phi;
  const double p_re = p_mag * std::cos(p_ang);
  const double p_im = p_mag * std::sin(p_ang);

  const double d_mag = obs.splus_z.is_zero() ? 0.0 : obs.splus_z.magnitude();
  const double d_ang = obs.splus_z.arg - frame.phi;
  const double d_re = d_mag * std::cos(d_ang);
  const double d_im = d_mag * std::sin(d_ang);

  const double casimir = spin * (spin + 1.0);

  VarianceCoeffs coeffs;
  coeffs.a = 0.5 * (st * st * (casimir - 3.0 * obs.sz2) -
                    (1.0 + ct * ct) * p_re + 2.0 * st * ct * d_re);
  coeffs.b = -ct * p_im + st * d_im;
  coeffs.c = casimir - obs.sz2 - p_re - coeffs.a;
  return coeffs;
}

std::pair<double, double> variances(const VarianceCoeffs& coeffs,
                                    double spin) {
  const double swing = std::hypot(coeffs.a, coeffs.b);
  const double v_plus = 0.5 * (coeffs.c + swing);
  double v_minus = 0.5 * (coeffs.c - swing);
  if (v_minus < -1e-9 * spin) {
    std::ostringstream msg;
    msg << "V- = " << v_minus << " below the numerical floor";
    throw Error(ErrorCode::NegativeVariance, "v_minus", msg.str());
  }
  if (v_minus < 0.0) v_minus = 0.0;
  return {v_plus, v_minus};
}

SqueezingMetrics squeezing_metrics(const ModelParams& params,
                                   const InitialState& init, double tau,
                                   const FrameOptions& options) {
  SqueezingMetrics metrics;
  metrics.tau = tau;
  if (tau == 0.0) {
    // The initial coherent state sits exactly at the standard quantum
    // limit: V+- = S/2 and all three parameters equal 1 for any (S, theta0,
    // phi0, gamma).
    metrics.v_plus = metrics.v_minus = 0.5 * params.spin;
    metrics.xi2 = metrics.zeta2 = metrics.zeta_s2 = 1.0;
    metrics.spin_norm = params.spin;
    return metrics;
  }

  const Observables obs = full_observables(params, init, tau);
  const FrameAngles frame = frame_angles(obs, params.spin, options);
  const VarianceCoeffs coeffs = variance_coeffs(obs, frame, params.spin);
  const auto [v_plus, v_minus] = variances(coeffs, params.spin);

  metrics.v_plus = v_plus;
  metrics.v_minus = v_minus;
  metrics.spin_norm = frame.spin_norm;
  metrics.xi2 = 2.0 * v_minus / params.spin;
  metrics.zeta2 = 2.0 * v_minus / frame.spin_norm;
  metrics.zeta_s2 =
      2.0 * params.spin * v_minus / (frame.spin_norm * frame.spin_norm);
  return metrics;
}

}  // namespace oatsq
