#pragma once

#include <complex>

#include "oatsq/model.hpp"
#include "oatsq/polar_complex.hpp"

namespace oatsq {

/// The five expectation values that determine the transverse variances of
/// the dephased one-axis-twisting state at one instant.  <S_z> and <S_z^2>
/// are plain reals (they are conserved); the transverse moments are kept in
/// extended-range polar form.
struct Observables {
  double sz = 0.0;          ///< <S_z>
  double sz2 = 0.0;         ///< <S_z^2>
  PolarComplex splus;       ///< <S_+>
  PolarComplex splus2;      ///< <S_+^2>
  PolarComplex splus_z;     ///< <S_+(2S_z+1)>
  double tau = 0.0;

  std::complex<double> splus_c() const { return splus.to_complex(); }
  std::complex<double> splus2_c() const { return splus2.to_complex(); }
  std::complex<double> splus_z_c() const { return splus_z.to_complex(); }
};

/// Twisting factor R(tau) = cos(tau) + i cos(theta0) sin(tau) in polar form.
///
/// The argument is the continuous branch of atan(cos(theta0) tan(tau)):
/// windings across tau = pi/2 + k pi are accumulated, not folded, so that
/// R^(2S-l) carries the correct total phase for any S.
PolarComplex twist_factor(double theta0, double tau);

/// <S_z> = S cos(theta0); independent of tau and gamma.
double expect_sz(double spin, const InitialState& init);

/// <S_z^2> = S/2 + S(S-1/2) cos^2(theta0); independent of tau and gamma.
double expect_sz2(double spin, const InitialState& init);

/// <S_+> = S sin(theta0) e^{i phi0} e^{-gamma tau} R(tau)^(2S-1).
PolarComplex expect_splus(const ModelParams& params, const InitialState& init,
                          double tau);

/// <S_+^2> = S(S-1/2) sin^2(theta0) e^{2i phi0} e^{-4 gamma tau} R(2tau)^(2S-2).
PolarComplex expect_splus2(const ModelParams& params, const InitialState& init,
                           double tau);

/// <S_+(2S_z+1)> = 2S(S-1/2) sin(theta0) e^{i phi0} e^{-gamma tau}
///                 R(tau)^(2S-2) [i sin(tau) + cos(theta0) cos(tau)].
PolarComplex expect_splus_z(const ModelParams& params,
                            const InitialState& init, double tau);

/// General transverse moment
/// <S_+^l> = e^{-gamma l^2 tau} (2S)!/(2^l (2S-l)!) sin^l(theta0)
///           e^{i l phi0} R(l tau)^(2S-l),   1 <= l <= 2S.
/// Throws MomentOrderOutOfRange otherwise.
PolarComplex expect_splus_l(const ModelParams& params,
                            const InitialState& init, double tau, int order);

/// All five expectation values at one instant.
Observables full_observables(const ModelParams& params,
                             const InitialState& init, double tau);

}  // namespace oatsq
