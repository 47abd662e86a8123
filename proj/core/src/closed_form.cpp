#include "oatsq/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace oatsq {

namespace {
constexpr double kPi = std::numbers::pi;

// log of the moment prefactor (2S)!/(2^l (2S-l)!) = prod_{k=0}^{l-1}(2S-k)/2.
// The running product keeps full relative accuracy for any S; lgamma
// differences would lose ~|lgamma| * eps absolute for very large spins.
double log_moment_prefactor(double two_s, int order) {
  double acc = 0.0;
  for (int k = 0; k < order; ++k) {
    acc += std::log(two_s - k) - std::numbers::ln2;
  }
  return acc;
}
}  // namespace

PolarComplex twist_factor(double theta0, double tau) {
  const double c0 = std::cos(theta0);
  const double s0 = std::sin(theta0);

  // Reduce tau = k*pi + t_r with t_r in [-pi/2, pi/2]; R(t_r + k pi) =
  // (-1)^k R(t_r), so |R| is pi-periodic and each half period adds pi to
  // the argument, with the sense of rotation set by the sign of cos(theta0).
  const double k = std::round(tau / kPi);
  const double tr = tau - k * kPi;
  const double x = std::cos(tr);  // >= 0 on the reduced range
  const double y = c0 * std::sin(tr);

  const double u = s0 * std::sin(tr);
  double log_mag;
  if (std::abs(u) <= 0.7) {
    // |R|^2 = 1 - sin^2(theta0) sin^2(tau): log1p keeps full accuracy where
    // the magnitude is close to 1 (the regime that gets raised to 2S-l).
    log_mag = 0.5 * std::log1p(-u * u);
  } else {
    const double mag2 = x * x + y * y;
    if (mag2 == 0.0) return PolarComplex::zero();
    log_mag = 0.5 * std::log(mag2);
  }

  const double half_turns = (c0 >= 0.0) ? k : -k;
  return PolarComplex::from_polar(log_mag,
                                  std::atan2(y, x) + half_turns * kPi);
}

double expect_sz(double spin, const InitialState& init) {
  return spin * init.cos_theta0();
}

double expect_sz2(double spin, const InitialState& init) {
  const double c0 = init.cos_theta0();
  return 0.5 * spin + spin * (spin - 0.5) * c0 * c0;
}

PolarComplex expect_splus(const ModelParams& params, const InitialState& init,
                          double tau) {
  const double s0 = init.sin_theta0();
  if (s0 == 0.0) return PolarComplex::zero();
  const PolarComplex r = twist_factor(init.theta0, tau).pow(2.0 * params.spin - 1.0);
  return r.scaled_by_log(std::log(params.spin * s0) - params.gamma * tau)
      .rotated(init.phi0);
}

PolarComplex expect_splus2(const ModelParams& params, const InitialState& init,
                           double tau) {
  const double s0 = init.sin_theta0();
  if (s0 == 0.0 || params.spin == 0.5) return PolarComplex::zero();
  const PolarComplex r =
      twist_factor(init.theta0, 2.0 * tau).pow(2.0 * params.spin - 2.0);
  const double log_pref = std::log(params.spin * (params.spin - 0.5) * s0 * s0);
  return r.scaled_by_log(log_pref - 4.0 * params.gamma * tau)
      .rotated(2.0 * init.phi0);
}

PolarComplex expect_splus_z(const ModelParams& params,
                            const InitialState& init, double tau) {
  const double s0 = init.sin_theta0();
  if (s0 == 0.0 || params.spin == 0.5) return PolarComplex::zero();
  const PolarComplex bracket = PolarComplex::from_cartesian(
      {init.cos_theta0() * std::cos(tau), std::sin(tau)});
  if (bracket.is_zero()) return PolarComplex::zero();
  const PolarComplex r =
      twist_factor(init.theta0, tau).pow(2.0 * params.spin - 2.0);
  const double log_pref =
      std::log(2.0 * params.spin * (params.spin - 0.5) * s0);
  return (r * bracket)
      .scaled_by_log(log_pref - params.gamma * tau)
      .rotated(init.phi0);
}

PolarComplex expect_splus_l(const ModelParams& params,
                            const InitialState& init, double tau, int order) {
  const double two_s = 2.0 * params.spin;
  if (order < 1 || order > two_s) {
    std::ostringstream msg;
    msg << "moment order " << order << " outside 1 .. 2S = " << two_s;
    throw Error(ErrorCode::MomentOrderOutOfRange, "order", msg.str());
  }
  const double s0 = init.sin_theta0();
  if (s0 == 0.0) return PolarComplex::zero();
  const PolarComplex r =
      twist_factor(init.theta0, order * tau).pow(two_s - order);
  const double log_pref =
      log_moment_prefactor(two_s, order) + order * std::log(s0);
  const double dephasing =
      params.gamma * static_cast<double>(order) * order * tau;
  return r.scaled_by_log(log_pref - dephasing).rotated(order * init.phi0);
}

Observables full_observables(const ModelParams& params,
                             const InitialState& init, double tau) {
  Observables obs;
  obs.sz = expect_sz(params.spin, init);
  obs.sz2 = expect_sz2(params.spin, init);
  obs.splus = expect_splus(params, init, tau);
  obs.splus2 = expect_splus2(params, init, tau);
  obs.splus_z = expect_splus_z(params, init, tau);
  obs.tau = tau;
  return obs;
}

}  // namespace oatsq
