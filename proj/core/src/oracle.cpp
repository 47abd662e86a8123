#include "oatsq/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <numbers>
#include <ostream>
#include <sstream>

namespace oatsq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_dense_cap(double spin, int dense_cap) {
  const int dim = static_cast<int>(std::llround(2.0 * spin)) + 1;
  if (dim > dense_cap) {
    std::ostringstream msg;
    msg << "2S+1 = " << dim << " exceeds the dense cap " << dense_cap;
    throw Error(ErrorCode::SpinTooLargeForDense, "spin", msg.str());
  }
}

Eigen::MatrixXcd initial_density(double spin, const InitialState& init,
                                 int dense_cap) {
  const CssAmplitudes amps = css_amplitudes(spin, init, dense_cap);
  const int dim = amps.dim();
  // Row index i holds m = S - i; the amplitude vector is indexed by S + m.
  Eigen::VectorXcd c(dim);
  for (int i = 0; i < dim; ++i) c(i) = amps.c[static_cast<size_t>(dim - 1 - i)];
  return c * c.adjoint();
}

struct DickeOperators {
  Eigen::MatrixXcd sz;
  Eigen::MatrixXcd splus;
};

DickeOperators build_operators(double spin, int dim) {
  const LadderTable ladder(spin);
  DickeOperators ops;
  ops.sz = Eigen::MatrixXcd::Zero(dim, dim);
  ops.splus = Eigen::MatrixXcd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) ops.sz(i, i) = spin - i;
  // <m+1|S_+|m> = X_{m+1}; with rows ordered S..-S the entry sits one row
  // above the diagonal.
  for (int i = 1; i < dim; ++i) {
    const double m = spin - i;
    ops.splus(i - 1, i) = ladder.at_m(m + 1.0);
  }
  return ops;
}

}  // namespace

LadderTable::LadderTable(double spin_in) : spin(spin_in) {
  const int n = static_cast<int>(std::llround(2.0 * spin_in));
  x.resize(static_cast<size_t>(n));
  // X_m = sqrt((S+m)(S-m+1)) for m = -S+1 .. S; with m = -S+j this is
  // sqrt(j (2S-j+1)), j = 1..2S.
  for (int j = 1; j <= n; ++j) {
    x[static_cast<size_t>(j - 1)] =
        std::sqrt(static_cast<double>(j) * (n - j + 1));
  }
}

double LadderTable::at_m(double m) const {
  const int j = static_cast<int>(std::llround(m + spin));
  return x.at(static_cast<size_t>(j - 1));
}

DenseState::DenseState(double spin, Eigen::MatrixXcd rho)
    : spin_(spin), rho_(std::move(rho)) {}

std::complex<double> DenseState::at_m(double m, double n) const {
  const int i = static_cast<int>(std::llround(spin_ - m));
  const int j = static_cast<int>(std::llround(spin_ - n));
  return rho_(i, j);
}

double DenseState::trace_deviation() const {
  return std::abs(rho_.trace() - std::complex<double>(1.0, 0.0));
}

double DenseState::hermiticity_deviation() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DenseState::purity() const {
  return (rho_ * rho_).trace().real();
}

double DenseState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      0.5 * (rho_ + rho_.adjoint()), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

DenseState evolve_closed(double spin, const InitialState& init, double tau,
                         double gamma, int dense_cap) {
  check_dense_cap(spin, dense_cap);
  Eigen::MatrixXcd rho = initial_density(spin, init, dense_cap);
  const int dim = static_cast<int>(rho.rows());
  const double two_s = 2.0 * spin;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      // m = S-i, n = S-j: m-n = j-i and m+n = 2S-i-j are exact integers.
      const double diff = static_cast<double>(j - i);
      const double sum = two_s - i - j;
      const double phase = -diff * sum * tau;        // -(m^2-n^2) tau
      const double damping = -diff * diff * gamma * tau;
      rho(i, j) *= std::polar(std::exp(damping), phase);
    }
  }
  return DenseState(spin, std::move(rho));
}

DenseState evolve_ode(double spin, const InitialState& init, double tau,
                      double gamma, const StepControl& control,
                      int dense_cap) {
  check_dense_cap(spin, dense_cap);
  Eigen::MatrixXcd rho = initial_density(spin, init, dense_cap);
  if (tau == 0.0) return DenseState(spin, std::move(rho));

  const double s2 = spin * spin;
  double h = 0.01 / std::max(s2 * (1.0 + 4.0 * gamma), 1.0);
  if (control.step > 0.0) {
    if (s2 * control.step > 0.01) {
      std::ostringstream msg;
      msg << "step " << control.step << " violates S^2 h <= 0.01";
      throw Error(ErrorCode::StepTooLarge, "step", msg.str());
    }
    h = control.step;
  }
  const long n_steps = std::max(1L, static_cast<long>(std::ceil(tau / h)));
  h = tau / static_cast<double>(n_steps);

  const int dim = static_cast<int>(rho.rows());
  const double two_s = 2.0 * spin;
  // Each element obeys an independent linear equation y' = lambda y with
  // lambda = i(n^2-m^2) - gamma (n-m)^2; advance all of them together with
  // the classical Runge-Kutta stages.
  Eigen::MatrixXcd lambda(dim, dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      const double diff = static_cast<double>(j - i);  // m - n
      const double sum = two_s - i - j;                // m + n
      lambda(i, j) = {-gamma * diff * diff, -diff * sum};
    }
  }

  for (long step = 0; step < n_steps; ++step) {
    const Eigen::MatrixXcd k1 = lambda.cwiseProduct(rho);
    const Eigen::MatrixXcd k2 = lambda.cwiseProduct(rho + (0.5 * h) * k1);
    const Eigen::MatrixXcd k3 = lambda.cwiseProduct(rho + (0.5 * h) * k2);
    const Eigen::MatrixXcd k4 = lambda.cwiseProduct(rho + h * k3);
    rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return DenseState(spin, std::move(rho));
}

Observables contract_observables(const DenseState& state) {
  const int dim = state.dim();
  const DickeOperators ops = build_operators(state.spin(), dim);
  const Eigen::MatrixXcd& rho = state.matrix();

  const Eigen::MatrixXcd splus2 = ops.splus * ops.splus;
  const Eigen::MatrixXcd splus_z =
      ops.splus * (2.0 * ops.sz + Eigen::MatrixXcd::Identity(dim, dim));

  Observables obs;
  obs.sz = (rho * ops.sz).trace().real();
  obs.sz2 = (rho * ops.sz * ops.sz).trace().real();
  obs.splus = PolarComplex::from_cartesian((rho * ops.splus).trace());
  obs.splus2 = PolarComplex::from_cartesian((rho * splus2).trace());
  obs.splus_z = PolarComplex::from_cartesian((rho * splus_z).trace());
  return obs;
}

namespace {

// Tridiagonal representation of S_psi = a S_x + b S_y + c S_z and the
// direct variance <S_psi^2> - <S_psi>^2 evaluated from the matrix bands.
struct ScanContext {
  const DenseState* state;
  std::vector<double> ladder;  // sp_i = <m_i|S_+|m_{i+1}>
  // Frame: n_psi = n1 cos(psi) + n2 sin(psi).
  Eigen::Vector3d n1, n2;

  double variance(double psi) const {
    const Eigen::Vector3d n = n1 * std::cos(psi) + n2 * std::sin(psi);
    const double a = n(0), b = n(1), c = n(2);
    const int dim = state->dim();
    const Eigen::MatrixXcd& rho = state->matrix();
    const double spin = state->spin();

    // Bands of M = a S_x + b S_y + c S_z: diagonal d_i = c m_i, upper
    // u_i = (a - i b)/2 * sp_i.
    const std::complex<double> coupling(0.5 * a, -0.5 * b);
    std::complex<double> mean = 0.0;
    std::complex<double> second = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double d_i = c * (spin - i);
      mean += rho(i, i) * d_i;
      double m2_diag = d_i * d_i;
      if (i + 1 < dim) {
        const std::complex<double> u_i = coupling * ladder[i];
        m2_diag += std::norm(u_i);
        mean += rho(i, i + 1) * std::conj(u_i) + rho(i + 1, i) * u_i;
        const double d_next = c * (spin - i - 1);
        const std::complex<double> m2_up1 = (d_i + d_next) * u_i;
        second +=
            rho(i, i + 1) * std::conj(m2_up1) + rho(i + 1, i) * m2_up1;
        if (i + 2 < dim) {
          const std::complex<double> u_next = coupling * ladder[i + 1];
          const std::complex<double> m2_up2 = u_i * u_next;
          second +=
              rho(i, i + 2) * std::conj(m2_up2) + rho(i + 2, i) * m2_up2;
        }
      }
      if (i > 0) m2_diag += std::norm(coupling * ladder[i - 1]);
      second += rho(i, i) * m2_diag;
    }
    return second.real() - mean.real() * mean.real();
  }
};

ScanContext make_scan_context(const DenseState& state, double phi_fallback) {
  const int dim = state.dim();
  const DickeOperators ops = build_operators(state.spin(), dim);
  const Eigen::MatrixXcd& rho = state.matrix();

  const std::complex<double> splus_mean = (rho * ops.splus).trace();
  const double mx = splus_mean.real();
  const double my = splus_mean.imag();
  const double mz = (rho * ops.sz).trace().real();
  const double norm = std::sqrt(mx * mx + my * my + mz * mz);
  if (!(norm > 1e-12 * state.spin())) {
    throw Error(ErrorCode::VanishingMeanSpin, "spin_norm",
                "mean spin vanishes; no transverse frame");
  }

  const double transverse = std::hypot(mx, my);
  const double st = transverse / norm;
  const double ct = mz / norm;
  const double phi = transverse > 0.0 ? std::atan2(my, mx) : phi_fallback;
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);

  ScanContext ctx;
  ctx.state = &state;
  ctx.ladder.resize(static_cast<size_t>(dim - 1));
  for (int i = 0; i + 1 < dim; ++i) {
    ctx.ladder[static_cast<size_t>(i)] = ops.splus(i, i + 1).real();
  }
  ctx.n1 = {-sp, cp, 0.0};
  ctx.n2 = {-ct * cp, -ct * sp, st};
  return ctx;
}

// Golden-section refinement of an extremum bracketed on [lo, hi].
template <typename F>
double golden_refine(F&& f, double lo, double hi, bool maximize,
                     double tol = 1e-12) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    const bool pick_left = maximize ? (fc > fd) : (fc < fd);
    if (pick_left) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

double transverse_variance(const DenseState& state, double psi,
                           double phi_fallback) {
  return make_scan_context(state, phi_fallback).variance(psi);
}

VarianceScan variance_scan(const DenseState& state, int n_angles,
                           double phi_fallback) {
  const ScanContext ctx = make_scan_context(state, phi_fallback);

  const double step = kPi / n_angles;
  int i_min = 0, i_max = 0;
  double best_min = ctx.variance(0.0), best_max = best_min;
  for (int i = 1; i < n_angles; ++i) {
    const double v = ctx.variance(i * step);
    if (v < best_min) {
      best_min = v;
      i_min = i;
    }
    if (v > best_max) {
      best_max = v;
      i_max = i;
    }
  }

  const auto f = [&ctx](double psi) { return ctx.variance(psi); };
  const double psi_min =
      golden_refine(f, (i_min - 1) * step, (i_min + 1) * step, false);
  const double psi_max =
      golden_refine(f, (i_max - 1) * step, (i_max + 1) * step, true);

  VarianceScan scan;
  scan.psi_min = psi_min;
  scan.v_minus = ctx.variance(psi_min);
  scan.v_plus = ctx.variance(psi_max);
  return scan;
}

void write_state_text(const DenseState& state, std::ostream& out) {
  const Eigen::MatrixXcd& rho = state.matrix();
  out.precision(17);
  out << state.dim() << "\n";
  for (int i = 0; i < state.dim(); ++i) {
    for (int j = 0; j < state.dim(); ++j) {
      out << rho(i, j).real() << " " << rho(i, j).imag()
          << (j + 1 == state.dim() ? "\n" : " ");
    }
  }
}

void write_state_binary(const DenseState& state, std::ostream& out) {
  const Eigen::MatrixXcd& rho = state.matrix();
  for (int i = 0; i < state.dim(); ++i) {
    for (int j = 0; j < state.dim(); ++j) {
      const double pair[2] = {rho(i, j).real(), rho(i, j).imag()};
      char bytes[sizeof(pair)];
      std::memcpy(bytes, pair, sizeof(pair));
      out.write(bytes, sizeof(pair));
    }
  }
}

}  // namespace oatsq
