#pragma once

#include "oatsq/closed_form.hpp"
#include "oatsq/model.hpp"

namespace oatsq {

enum class RegimeKind { Negligible, Moderate, Strong };

const char* to_string(RegimeKind kind) noexcept;

/// Dephasing-strength regime, classified by gamma against powers of S.
/// lower_exponent/upper_exponent record the boundary exponents used:
/// gamma < S^lower  -> Negligible, gamma >= S^upper -> Strong.
struct Regime {
  RegimeKind kind = RegimeKind::Negligible;
  double lower_exponent = 0.0;
  double upper_exponent = 0.0;
};

struct AnalyticPrediction {
  double tau_min = 0.0;
  double xi2_min = 0.0;
  Regime regime;
  const char* formula = "";  ///< which closed form produced the numbers
};

/// Combined decay exponent beta = S tau^2 sin^2(theta0) + gamma tau of the
/// transverse coherence in the short-time regime.
double decay_exponent(double spin, const InitialState& init, double gamma,
                      double tau);

/// Characteristic coherence time 1/(sqrt(S) sin(theta0)) of the twisting-
/// induced phase diffusion.  Throws PoleState at theta0 = 0 or pi.
double coherence_time(double spin, const InitialState& init);

/// Short-time squeezing parameter
///   xi^2 ~ gamma tau / beta + 1/(4 S beta sin^2 t0)
///        + (2 beta^2/3)[1 + 9 S sin^2 t0 cos^2 t0].
/// include_dropped_term adds the beta^2 cos^2 t0 remainder that the leading
/// expansion discards, for error budgeting.
double xi2_short_time(double spin, const InitialState& init, double gamma,
                      double tau, bool include_dropped_term = false);

/// Short-time squeezing without dephasing (the gamma = 0 reduction).
double xi2_no_dephasing(double spin, const InitialState& init, double tau);

/// Moderate-dephasing approximation: the 1/(4 S beta) noise floor dropped
/// and beta taken as S tau^2 sin^2(theta0) alone.
double xi2_moderate(double spin, const InitialState& init, double gamma,
                    double tau);

/// Strong-dephasing limit: xi^2 ~ 1 + (2 beta^2/3)[...] with beta = gamma tau.
/// Always >= 1 (no squeezing).
double xi2_strong(double spin, const InitialState& init, double gamma,
                  double tau);

/// Optimal time and squeezing when dephasing is negligible.
double tau_min_weak(double spin, const InitialState& init);
double xi2_min_weak(double spin, const InitialState& init);

/// Optimal time and squeezing under moderate dephasing (gamma > 0).
double tau_min_moderate(double spin, const InitialState& init, double gamma);
double xi2_min_moderate(double spin, const InitialState& init, double gamma);

/// Classifies the dephasing regime.  For theta0 within 1e-6 of pi/2 the
/// operational boundaries are S^(-1/2) and S^(1/2); otherwise S^(-1/3) and
/// S^(1/4).
Regime classify_regime(double spin, const InitialState& init, double gamma);

/// Optimal-time prediction from the regime-appropriate closed form.
AnalyticPrediction predict_optimum(const ModelParams& params,
                                   const InitialState& init);

/// Short-time approximations of the five observables (<S_z>, <S_z^2> exact;
/// transverse moments with the Gaussian coherence decay e^{-beta} and the
/// linearized frame azimuth phi ~ phi0 + 2 S tau cos theta0).  Diagnostic
/// companion to full_observables, not part of the exact pipeline.
Observables approx_observables(double spin, const InitialState& init,
                               double gamma, double tau);

}  // namespace oatsq
