#pragma once

#include <span>
#include <utility>
#include <vector>

#include "oatsq/model.hpp"
#include "oatsq/squeezing.hpp"

namespace oatsq {

struct MinimizationResult {
  double tau_min = 0.0;
  double xi2_min = 0.0;
  long evaluations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  bool converged = false;
};

struct MinimizeOptions {
  double bracket_hint = 0.0;   ///< starting scale; 0 seeds from the analytics
  double rel_tol = 1e-8;       ///< relative tau tolerance of the refinement
  long max_evaluations = 100000;
};

/// Brackets the first local minimum of the exact xi^2(tau) by geometric
/// search (factor 1.5 expansion/contraction from a tenth of the analytic
/// optimal-time seed), then refines by golden section.  Throws PoleState at
/// sin(theta0) = 0 and NoMinimumFound when the objective is monotone over
/// the searched range.
MinimizationResult minimize_xi2(const ModelParams& params,
                                const InitialState& init,
                                const MinimizeOptions& options = {});

/// One tau-grid row; rows where the mean spin vanished are flagged invalid
/// rather than dropped.
struct SweepPoint {
  double tau = 0.0;
  SqueezingMetrics metrics;
  bool valid = false;
};

/// Exact metrics on a strictly increasing, non-negative tau grid.
std::vector<SweepPoint> sweep_tau(const ModelParams& params,
                                  const InitialState& init,
                                  std::span<const double> tau_grid);

/// Per-theta0 exact minimisation at fixed gamma.
std::vector<std::pair<double, MinimizationResult>> sweep_theta0(
    double spin, std::span<const double> theta0_grid, double gamma,
    double phi0 = 0.0);

struct PowerLawFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares of log(y) against log(x).  Requires >= 3 strictly
/// positive points; throws NonpositiveData / FitDegenerate.
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points);

/// Runs minimize_xi2 per spin value and fits log(xi2_min) vs log(S).
/// Requires >= 3 spins, all >= 50.
PowerLawFit scaling_sweep(std::span<const double> spin_grid,
                          const InitialState& init, double gamma);

}  // namespace oatsq
