#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <vector>

#include "oatsq/closed_form.hpp"
#include "oatsq/model.hpp"

namespace oatsq {

/// Ladder matrix elements X_m = sqrt((S+m)(S-m+1)) for m = -S+1 .. S.
struct LadderTable {
  double spin = 0.5;
  std::vector<double> x;

  explicit LadderTable(double spin);
  /// X_m; m must be one of -S+1 .. S.
  double at_m(double m) const;
};

/// Dense density matrix in the Dicke basis, rows and columns ordered from
/// m = S down to m = -S.  Brute-force ground truth for small S only.
class DenseState {
 public:
  DenseState(double spin, Eigen::MatrixXcd rho);

  double spin() const { return spin_; }
  int dim() const { return static_cast<int>(rho_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return rho_; }

  /// m for row/column index i (m = S - i).
  double m_of(int index) const { return spin_ - index; }
  std::complex<double> at_m(double m, double n) const;

  double trace_deviation() const;       ///< |Tr(rho) - 1|
  double hermiticity_deviation() const; ///< max |rho - rho^dagger|
  double purity() const;                ///< Tr(rho^2)
  double min_eigenvalue() const;        ///< smallest eigenvalue (PSD check)

 private:
  double spin_;
  Eigen::MatrixXcd rho_;
};

/// Exact elementwise propagation: rho_{m,n}(tau) = rho_{m,n}(0)
/// e^{-i(m^2-n^2) tau} e^{-(m-n)^2 gamma tau} from the initial coherent
/// state.  Throws SpinTooLargeForDense past the dense cap.
DenseState evolve_closed(double spin, const InitialState& init, double tau,
                         double gamma, int dense_cap = kDefaultDenseCap);

struct StepControl {
  /// Fixed integration step; 0 selects h = 0.01 / (S^2 (1 + 4 gamma)).
  /// A caller-forced step with S^2 h > 0.01 throws StepTooLarge.
  double step = 0.0;
};

/// Independent route: integrates d rho_{m,n}/d tau =
/// [i(n^2-m^2) - gamma (n-m)^2] rho_{m,n} with classical fixed-step RK4.
DenseState evolve_ode(double spin, const InitialState& init, double tau,
                      double gamma, const StepControl& control = {},
                      int dense_cap = kDefaultDenseCap);

/// The five expectation values by direct operator traces against dense
/// S_z and S_+ matrices built from the ladder table.
Observables contract_observables(const DenseState& state);

struct VarianceScan {
  double v_minus = 0.0;
  double v_plus = 0.0;
  double psi_min = 0.0;  ///< angle of the minimal variance in the frame
};

/// Direct minimisation of the transverse variance: scans psi over a
/// uniform grid in [0, pi), evaluating (Delta S_psi)^2 from the matrix for
/// each angle, then refines min and max by golden section to 1e-12 in psi.
/// Throws VanishingMeanSpin when the contracted mean spin vanishes.
VarianceScan variance_scan(const DenseState& state, int n_angles = 720,
                           double phi_fallback = 0.0);

/// Transverse variance at one frame angle psi (the scan's elementary step).
double transverse_variance(const DenseState& state, double psi,
                           double phi_fallback = 0.0);

/// Debug dumps: decimal text (one "re im" pair per element, row-major) and
/// raw little-endian binary64 pairs, row-major.
void write_state_text(const DenseState& state, std::ostream& out);
void write_state_binary(const DenseState& state, std::ostream& out);

}  // namespace oatsq
