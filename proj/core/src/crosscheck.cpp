#include "oatsq/crosscheck.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "oatsq/oracle.hpp"
#include "oatsq/random.hpp"
#include "oatsq/squeezing.hpp"

namespace oatsq {

namespace {

// Relative deviation with a magnitude floor: values both below 1e-13 are
// treated as agreeing zeros.
double rel_dev(std::complex<double> a, std::complex<double> b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale <= 1e-13) return 0.0;
  return std::abs(a - b) / scale;
}

double rel_dev(double a, double b) {
  return rel_dev(std::complex<double>(a, 0.0), std::complex<double>(b, 0.0));
}

}  // namespace

double CrossCheckReport::max_dev_observables() const {
  return std::max({max_dev_sz, max_dev_sz2, max_dev_splus, max_dev_splus2,
                   max_dev_splus_z});
}

bool CrossCheckReport::passed(const CrossCheckConfig& config) const {
  return max_dev_observables() <= config.tol_dense &&
         max_dev_xi2_scan <= config.tol_scan && max_dev_ode <= config.tol_ode;
}

CrossCheckReport run_cross_check(const CrossCheckConfig& config) {
  SplitMix64 rng(config.seed);
  CrossCheckReport report;
  report.draws = config.draws;

  const int ode_draws =
      config.ode_draws < 0 ? config.draws : std::min(config.ode_draws,
                                                     config.draws);

  for (int k = 0; k < config.draws; ++k) {
    DrawParams draw;
    draw.spin = config.spin > 0.0
                    ? config.spin
                    : rng.half_integer_spin(0.5, config.random_spin_max);
    draw.theta0 = rng.uniform(0.15, std::numbers::pi - 0.15);
    draw.phi0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
    draw.gamma = rng.uniform(0.0, 2.0);
    draw.tau = rng.uniform(0.01, 0.25);

    const InitialState init = InitialState::make(draw.theta0, draw.phi0);
    const ModelParams params{draw.spin, draw.gamma};

    const DenseState state =
        evolve_closed(draw.spin, init, draw.tau, draw.gamma, config.dense_cap);
    const Observables dense = contract_observables(state);
    const Observables closed = full_observables(params, init, draw.tau);

    const double devs[] = {
        rel_dev(closed.sz, dense.sz),
        rel_dev(closed.sz2, dense.sz2),
        rel_dev(closed.splus_c(), dense.splus_c()),
        rel_dev(closed.splus2_c(), dense.splus2_c()),
        rel_dev(closed.splus_z_c(), dense.splus_z_c()),
    };
    if (devs[0] > report.max_dev_sz) report.max_dev_sz = devs[0];
    if (devs[1] > report.max_dev_sz2) report.max_dev_sz2 = devs[1];
    if (devs[2] > report.max_dev_splus) report.max_dev_splus = devs[2];
    if (devs[3] > report.max_dev_splus2) report.max_dev_splus2 = devs[3];
    if (devs[4] > report.max_dev_splus_z) report.max_dev_splus_z = devs[4];
    const double draw_max = *std::max_element(std::begin(devs), std::end(devs));
    if (draw_max >= report.max_dev_observables()) report.worst_dense = draw;

    const VarianceScan scan = variance_scan(state);
    const SqueezingMetrics metrics = squeezing_metrics(params, init, draw.tau);
    const double scan_dev =
        std::abs(metrics.xi2 - 2.0 * scan.v_minus / draw.spin);
    if (scan_dev > report.max_dev_xi2_scan) {
      report.max_dev_xi2_scan = scan_dev;
      report.worst_scan = draw;
    }

    if (k < ode_draws) {
      DrawParams ode_draw = draw;
      ode_draw.spin = std::min(draw.spin, config.ode_spin_max);
      const DenseState via_ode = evolve_ode(ode_draw.spin, init, draw.tau,
                                            draw.gamma, {}, config.dense_cap);
      const DenseState via_closed = evolve_closed(
          ode_draw.spin, init, draw.tau, draw.gamma, config.dense_cap);
      const double ode_dev =
          (via_ode.matrix() - via_closed.matrix()).cwiseAbs().maxCoeff();
      ++report.ode_draws;
      if (ode_dev > report.max_dev_ode) {
        report.max_dev_ode = ode_dev;
        report.worst_ode = ode_draw;
      }
    }
  }
  return report;
}

}  // namespace oatsq
