#pragma once

#include <cstdint>

#include "oatsq/model.hpp"

namespace oatsq {

/// Seeded randomized equivalence run: closed-form observables against dense
/// contraction, pipeline xi^2 against the brute-force psi-scan, and the
/// elementwise closed map against RK4 integration.  This is the machinery
/// behind the oracle-check command and the equivalence suites.
struct CrossCheckConfig {
  int draws = 200;
  std::uint64_t seed = 42;
  /// Fixed spin for all draws; <= 0 draws a random half-integer spin in
  /// [1/2, random_spin_max] per draw.
  double spin = 10.0;
  double random_spin_max = 20.0;
  /// ODE comparisons run on the first ode_draws draws (-1: all), with the
  /// drawn spin capped at ode_spin_max to bound the step count.
  int ode_draws = -1;
  double ode_spin_max = 8.0;
  double tol_dense = 1e-10;  ///< relative, closed form vs dense contraction
  double tol_scan = 1e-9;    ///< absolute, pipeline xi^2 vs psi-scan
  double tol_ode = 1e-6;     ///< elementwise, closed map vs RK4
  int dense_cap = kDefaultDenseCap;
};

struct DrawParams {
  double spin = 0.0;
  double theta0 = 0.0;
  double phi0 = 0.0;
  double gamma = 0.0;
  double tau = 0.0;
};

struct CrossCheckReport {
  double max_dev_sz = 0.0;
  double max_dev_sz2 = 0.0;
  double max_dev_splus = 0.0;
  double max_dev_splus2 = 0.0;
  double max_dev_splus_z = 0.0;
  double max_dev_xi2_scan = 0.0;
  double max_dev_ode = 0.0;
  DrawParams worst_dense;  ///< draw with the largest observable deviation
  DrawParams worst_scan;
  DrawParams worst_ode;
  int draws = 0;
  int ode_draws = 0;

  double max_dev_observables() const;
  bool passed(const CrossCheckConfig& config) const;
};

CrossCheckReport run_cross_check(const CrossCheckConfig& config);

}  // namespace oatsq
