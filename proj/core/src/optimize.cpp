#include "oatsq/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "oatsq/analytics.hpp"

namespace oatsq {

namespace {

constexpr double kExpandFactor = 1.5;
constexpr double kTauFloor = 1e-15;

struct Objective {
  const ModelParams& params;
  const InitialState& init;
  long evaluations = 0;

  // Past full dephasing the mean spin vanishes and the frame is undefined;
  // for bracketing purposes such times count as arbitrarily bad.
  double operator()(double tau) {
    ++evaluations;
    try {
      return squeezing_metrics(params, init, tau).xi2;
    } catch (const Error& err) {
      if (err.code() == ErrorCode::VanishingMeanSpin) {
        return std::numeric_limits<double>::infinity();
      }
      throw;
    }
  }
};

}  // namespace

MinimizationResult minimize_xi2(const ModelParams& params,
                                const InitialState& init,
                                const MinimizeOptions& options) {
  if (init.sin_theta0() == 0.0) {
    throw Error(ErrorCode::PoleState, "theta0",
                "xi^2 is identically 1 for a pole state; no minimum");
  }

  double seed = options.bracket_hint;
  if (!(seed > 0.0)) {
    seed = tau_min_weak(params.spin, init);
    if (params.gamma > 0.0) {
      seed = std::min(seed, tau_min_moderate(params.spin, init, params.gamma));
    }
  }

  Objective objective{params, init};
  const long budget = options.max_evaluations;

  // Geometric walk from a tenth of the analytic seed until the objective
  // turns upward; walk downhill in tau first if the seed already sits past
  // the minimum.
  double lo = 0.0, mid = 0.1 * seed, hi = 0.0;
  double f_mid = objective(mid);
  {
    double up = mid * kExpandFactor;
    double f_up = objective(up);
    if (f_up < f_mid) {
      double prev = mid;
      double cur = up, f_cur = f_up;
      for (;;) {
        if (objective.evaluations >= budget) break;
        const double next = cur * kExpandFactor;
        const double f_next = objective(next);
        if (f_next > f_cur) {
          lo = prev;
          mid = cur;
          f_mid = f_cur;
          hi = next;
          break;
        }
        prev = cur;
        cur = next;
        f_cur = f_next;
      }
    } else {
      double above = up, cur = mid, f_cur = f_mid;
      for (;;) {
        if (objective.evaluations >= budget) break;
        const double below = cur / kExpandFactor;
        if (below < kTauFloor) {
          throw Error(ErrorCode::NoMinimumFound, "tau",
                      "xi^2(tau) is monotone over the searched range");
        }
        const double f_below = objective(below);
        if (f_below > f_cur) {
          lo = below;
          mid = cur;
          f_mid = f_cur;
          hi = above;
          break;
        }
        above = cur;
        cur = below;
        f_cur = f_below;
      }
    }
  }
  if (hi == 0.0) {
    throw Error(ErrorCode::NoMinimumFound, "tau",
                "bracketing exhausted the evaluation budget");
  }

  MinimizationResult result;
  result.bracket_lo = lo;
  result.bracket_hi = hi;

  // Golden-section refinement on [lo, hi].
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = objective(c), fd = objective(d);
  bool converged = false;
  while (objective.evaluations < budget) {
    if (b - a <= options.rel_tol * b) {
      converged = true;
      break;
    }
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = objective(d);
    }
  }

  const double tau_best = fc < fd ? c : d;
  result.tau_min = tau_best;
  result.xi2_min = std::min(fc, fd);
  result.evaluations = objective.evaluations;
  result.converged = converged;
  return result;
}

std::vector<SweepPoint> sweep_tau(const ModelParams& params,
                                  const InitialState& init,
                                  std::span<const double> tau_grid) {
  if (tau_grid.empty()) {
    throw Error(ErrorCode::EmptyGrid, "tau_grid", "tau grid is empty");
  }
  for (size_t i = 0; i < tau_grid.size(); ++i) {
    if (tau_grid[i] < 0.0 || (i > 0 && tau_grid[i] <= tau_grid[i - 1])) {
      throw Error(ErrorCode::EmptyGrid, "tau_grid",
                  "tau grid must be non-negative and strictly increasing");
    }
  }

  std::vector<SweepPoint> rows;
  rows.reserve(tau_grid.size());
  for (const double tau : tau_grid) {
    SweepPoint row;
    row.tau = tau;
    try {
      row.metrics = squeezing_metrics(params, init, tau);
      row.valid = true;
    } catch (const Error& err) {
      if (err.code() != ErrorCode::VanishingMeanSpin) throw;
      row.metrics = SqueezingMetrics{};
      row.metrics.tau = tau;
      row.valid = false;
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::pair<double, MinimizationResult>> sweep_theta0(
    double spin, std::span<const double> theta0_grid, double gamma,
    double phi0) {
  if (theta0_grid.empty()) {
    throw Error(ErrorCode::EmptyGrid, "theta0_grid", "theta0 grid is empty");
  }
  std::vector<std::pair<double, MinimizationResult>> out;
  out.reserve(theta0_grid.size());
  for (const double theta0 : theta0_grid) {
    const InitialState init = InitialState::make(theta0, phi0);
    const ModelParams params{spin, gamma};
    out.emplace_back(theta0, minimize_xi2(params, init));
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) {
    throw Error(ErrorCode::NonpositiveData, "points",
                "power-law fit needs at least 3 points");
  }
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw Error(ErrorCode::NonpositiveData, "points",
                  "power-law fit needs strictly positive data");
    }
  }

  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : points) {
    const double lx = std::log(x);
    const double ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-12 * std::max(1.0, n * sxx)) {
    throw Error(ErrorCode::FitDegenerate, "points",
                "abscissae are (nearly) identical");
  }

  PowerLawFit fit;
  fit.exponent = (n * sxy - sx * sy) / det;
  fit.log_prefactor = (sy - fit.exponent * sx) / n;
  fit.points.assign(points.begin(), points.end());

  const double mean_ly = sy / n;
  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& [x, y] : points) {
    const double ly = std::log(y);
    const double model = fit.log_prefactor + fit.exponent * std::log(x);
    ss_res += (ly - model) * (ly - model);
    ss_tot += (ly - mean_ly) * (ly - mean_ly);
  }
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                               : 1.0;
  return fit;
}

PowerLawFit scaling_sweep(std::span<const double> spin_grid,
                          const InitialState& init, double gamma) {
  if (spin_grid.size() < 3) {
    throw Error(ErrorCode::NonpositiveData, "spin_grid",
                "scaling sweep needs at least 3 spin values");
  }
  std::vector<std::pair<double, double>> points;
  points.reserve(spin_grid.size());
  for (const double spin : spin_grid) {
    if (spin < 50.0) {
      throw Error(ErrorCode::NonpositiveData, "spin_grid",
                  "scaling sweep expects spins >= 50");
    }
    const ModelParams params{spin, gamma};
    points.emplace_back(spin, minimize_xi2(params, init).xi2_min);
  }
  return fit_power_law(points);
}

}  // namespace oatsq
