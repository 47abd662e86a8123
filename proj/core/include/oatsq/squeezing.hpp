#pragma once

#include <utility>

#include "oatsq/closed_form.hpp"
#include "oatsq/model.hpp"

namespace oatsq {

/// Orientation of the mean-spin frame.  sin_theta and cos_theta are built
/// directly from |<S_+>|/|<S>| and <S_z>/|<S>|, so sin^2+cos^2 = 1 holds by
/// construction.  When |<S_+>| falls below the degeneracy threshold the
/// mean spin points along z, phi is taken from the caller-supplied fallback
/// and the degenerate flag is set.
struct FrameAngles {
  double theta = 0.0;
  double phi = 0.0;
  double sin_theta = 0.0;
  double cos_theta = 1.0;
  double spin_norm = 0.0;  ///< |<S>|
  bool degenerate = false;
};

/// Coefficients of the transverse variance (Delta S_psi)^2 =
/// C/2 + (A/2) cos(2 psi) + (B/2) sin(2 psi) in the mean-spin frame.
struct VarianceCoeffs {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

struct SqueezingMetrics {
  double v_plus = 0.0;
  double v_minus = 0.0;
  double xi2 = 1.0;      ///< Kitagawa-Ueda, 2 V_- / S
  double zeta2 = 1.0;    ///< 2 V_- / |<S>|
  double zeta_s2 = 1.0;  ///< Wineland spectroscopic, 2 S V_- / |<S>|^2
  double spin_norm = 0.0;
  double tau = 0.0;
};

struct FrameOptions {
  double eps_frame_rel = 1e-12;  ///< degeneracy threshold on |<S_+>|, times S
  double eps_norm_rel = 1e-12;   ///< vanishing-mean-spin threshold, times S
  double phi_fallback = 0.0;     ///< frame azimuth used when degenerate
};

/// Builds the mean-spin frame from the observables.  Throws
/// VanishingMeanSpin when |<S>| <= eps_norm_rel * S.
FrameAngles frame_angles(const Observables& obs, double spin,
                         const FrameOptions& options = {});

/// Variance coefficients from the five expectation values.  Only cos(phi)
/// and sin(phi) of the frame azimuth enter (through the rotated moments).
VarianceCoeffs variance_coeffs(const Observables& obs,
                               const FrameAngles& frame, double spin);

/// V_± = (C ± sqrt(A^2+B^2)) / 2.  V_- within -1e-9*S of zero is clamped
/// to zero; anything more negative signals an upstream inconsistency and
/// throws NegativeVariance.
std::pair<double, double> variances(const VarianceCoeffs& coeffs, double spin);

/// Full pipeline: observables -> frame -> coefficients -> variances ->
/// the three squeezing parameters.  At tau = 0 the state is the initial
/// coherent state, whose metrics are exactly the standard quantum limit;
/// that value is returned in closed form.
SqueezingMetrics squeezing_metrics(const ModelParams& params,
                                   const InitialState& init, double tau,
                                   const FrameOptions& options = {});

}  // namespace oatsq
