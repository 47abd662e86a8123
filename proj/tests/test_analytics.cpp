#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oatsq/analytics.hpp"
#include "oatsq/squeezing.hpp"
#include "support/helpers.hpp"

using namespace oatsq;
using test_support::Rng;
using test_support::rel_dev;

namespace {
constexpr double kPi = std::numbers::pi;
const InitialState kEquator = InitialState::make(kPi / 2, 0.0);

// Straightforward golden-section minimizer for the closed formulas.
template <typename F>
std::pair<double, double> golden_min(F&& f, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-12 * b) {
    if (fc < fd) {
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
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}
}  // namespace

TEST_CASE("decay exponent composes twisting and dephasing terms") {
  CHECK(decay_exponent(1000.0, kEquator, 0.0, 0.01) ==
        doctest::Approx(0.1).epsilon(1e-13));
  CHECK(decay_exponent(50.0, InitialState::make(0.0, 0.0), 2.0, 0.3) ==
        doctest::Approx(0.6).epsilon(1e-15));
  CHECK(decay_exponent(1000.0, kEquator, 1.0, 0.01) ==
        doctest::Approx(0.11).epsilon(1e-13));
}

TEST_CASE("coherence time") {
  CHECK(coherence_time(1e4, kEquator) == doctest::Approx(0.01).epsilon(1e-13));
  CHECK(coherence_time(1.0, kEquator) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(coherence_time(100.0, InitialState::make(kPi / 6, 0.0)) ==
        doctest::Approx(0.2).epsilon(1e-13));
  CHECK_THROWS_AS(coherence_time(100.0, InitialState::make(0.0, 0.0)), Error);
}

TEST_CASE("short-time squeezing hits the printed optimum values") {
  // undamped optimum
  CHECK(xi2_short_time(1000.0, kEquator, 0.0, 7.565e-3) ==
        doctest::Approx(6.552e-3).epsilon(2e-3));
  // no-dephasing form coincides with the full one at gamma = 0
  Rng rng(43);
  for (int k = 0; k < 30; ++k) {
    const double spin = rng.uniform(50.0, 1e5);
    const InitialState init =
        InitialState::make(rng.uniform(0.2, kPi - 0.2), 0.0);
    const double tau = rng.uniform(1e-4, 0.1);
    CHECK(rel_dev(xi2_short_time(spin, init, 0.0, tau),
                  xi2_no_dephasing(spin, init, tau)) < 1e-14);
  }
  // the moderate-dephasing minimum lands near the printed value
  const auto [tau_m, xi2_m] = golden_min(
      [](double tau) { return xi2_short_time(1000.0, kEquator, 1.0, tau); },
      1e-3, 0.1);
  CHECK(tau_m == doctest::Approx(1.3e-2).epsilon(0.06));
  CHECK(xi2_m == doctest::Approx(9.596e-2).epsilon(0.02));
}

TEST_CASE("optimal-time closed forms match their printed anchors to 0.1%") {
  CHECK(tau_min_weak(1000.0, kEquator) ==
        doctest::Approx(7.565e-3).epsilon(1e-3));
  CHECK(xi2_min_weak(1000.0, kEquator) ==
        doctest::Approx(6.552e-3).epsilon(1e-3));
  CHECK(tau_min_moderate(1000.0, kEquator, 1.0) ==
        doctest::Approx(1.303e-2).epsilon(1e-3));
  CHECK(xi2_min_moderate(1000.0, kEquator, 1.0) ==
        doctest::Approx(9.596e-2).epsilon(1e-3));
  CHECK(tau_min_moderate(1000.0, kEquator, 10.0) ==
        doctest::Approx(2.064e-2).epsilon(1e-3));
  CHECK(xi2_min_moderate(1000.0, kEquator, 10.0) ==
        doctest::Approx(0.605).epsilon(5e-3));
}

TEST_CASE("pole and sign preconditions are enforced") {
  const InitialState pole = InitialState::make(0.0, 0.0);
  CHECK_THROWS_AS(tau_min_weak(100.0, pole), Error);
  CHECK_THROWS_AS(xi2_min_weak(100.0, pole), Error);
  CHECK_THROWS_AS(xi2_short_time(100.0, kEquator, 0.0, 0.0), Error);
  CHECK_THROWS_AS(tau_min_moderate(100.0, kEquator, 0.0), Error);
  CHECK_THROWS_AS(xi2_min_moderate(100.0, kEquator, -1.0), Error);
}

TEST_CASE("weak-regime scalings of the optimal time") {
  // equatorial: tau_min scales as S^(-2/3)
  const double ratio =
      tau_min_weak(4000.0, kEquator) / tau_min_weak(1000.0, kEquator);
  CHECK(ratio == doctest::Approx(std::pow(4.0, -2.0 / 3.0)).epsilon(1e-12));

  // tilted: tau_min approaches S^(-5/6) for large S
  const InitialState tilted = InitialState::make(kPi / 4, 0.0);
  const double slope =
      std::log(tau_min_weak(1e6, tilted) / tau_min_weak(1e5, tilted)) /
      std::log(10.0);
  CHECK(slope == doctest::Approx(-5.0 / 6.0).epsilon(2e-3));
}

TEST_CASE("equatorial ideal-limit identity of the optimal squeezing") {
  for (const double spin : {1e2, 1e3, 1e5}) {
    const double via_formula = xi2_min_weak(spin, kEquator);
    const double ideal_limit = 0.5 * std::pow(2.0 * spin / 3.0, -2.0 / 3.0);
    CHECK(rel_dev(via_formula, ideal_limit) < 1e-12);
  }
}

TEST_CASE("anti-squeezing growth is quartic in tau at late short times") {
  // the beta^2 term dominates: doubling tau multiplies xi^2 by ~16
  const double lo = xi2_no_dephasing(1000.0, kEquator, 0.15);
  const double hi = xi2_no_dephasing(1000.0, kEquator, 0.30);
  CHECK(hi / lo == doctest::Approx(16.0).epsilon(0.01));
}

TEST_CASE("moderate-regime scalings") {
  // gamma scaling at fixed S: tau_min grows as gamma^(1/5)
  const double ratio = tau_min_moderate(1000.0, kEquator, 32.0) /
                       tau_min_moderate(1000.0, kEquator, 1.0);
  CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
  // S scaling at fixed gamma: xi2_min falls as S^(-2/5)
  const double s_ratio = xi2_min_moderate(1e5, kEquator, 1.0) /
                         xi2_min_moderate(1e3, kEquator, 1.0);
  CHECK(s_ratio == doctest::Approx(std::pow(100.0, -0.4)).epsilon(1e-12));
  // monotone degradation with gamma
  double previous = 0.0;
  for (double gamma = 0.25; gamma <= 16.0; gamma *= 2.0) {
    const double value = xi2_min_moderate(1000.0, kEquator, gamma);
    CHECK(value > previous);
    previous = value;
  }
}

TEST_CASE("minimizing the approximate curves recovers their closed optima") {
  // The moderate curve's optimum is an exact calculus identity.
  const auto [tau_m, xi2_m] = golden_min(
      [](double tau) { return xi2_moderate(1000.0, kEquator, 1.0, tau); },
      1e-3, 0.1);
  CHECK(rel_dev(tau_m, tau_min_moderate(1000.0, kEquator, 1.0)) < 1e-6);
  CHECK(rel_dev(xi2_m, xi2_min_moderate(1000.0, kEquator, 1.0)) < 1e-9);

  // Same for the undamped curve.
  const auto [tau_w, xi2_w] = golden_min(
      [](double tau) { return xi2_no_dephasing(1000.0, kEquator, tau); },
      1e-3, 0.1);
  CHECK(rel_dev(tau_w, tau_min_weak(1000.0, kEquator)) < 1e-6);
  CHECK(rel_dev(xi2_w, xi2_min_weak(1000.0, kEquator)) < 1e-9);

  // The full short-time curve at gamma = 1 lands close to the moderate
  // optimum; the retained noise-floor term shifts tau_min by ~4.5%, the
  // value by ~1.5%.
  const auto [tau_f, xi2_f] = golden_min(
      [](double tau) { return xi2_short_time(1000.0, kEquator, 1.0, tau); },
      1e-3, 0.1);
  CHECK(rel_dev(tau_f, tau_min_moderate(1000.0, kEquator, 1.0)) < 0.05);
  CHECK(rel_dev(xi2_f, xi2_min_moderate(1000.0, kEquator, 1.0)) < 0.02);
}

TEST_CASE("moderate curve evaluated at its optimum time") {
  CHECK(xi2_moderate(1000.0, kEquator, 1.0, 1.303e-2) ==
        doctest::Approx(9.596e-2).epsilon(1e-3));
  // gamma = 0 leaves only the anti-squeezing growth
  const double b = 1000.0 * 0.01 * 0.01;
  CHECK(xi2_moderate(1000.0, kEquator, 0.0, 0.01) ==
        doctest::Approx((2.0 / 3.0) * b * b).epsilon(1e-12));
}

TEST_CASE("strong-dephasing curve never squeezes") {
  CHECK(xi2_strong(1e5, kEquator, 100.0, 0.0) == 1.0);
  Rng rng(47);
  for (int k = 0; k < 50; ++k) {
    const double value = xi2_strong(rng.uniform(1e2, 1e6), kEquator,
                                    rng.uniform(0.1, 1e3),
                                    rng.uniform(1e-6, 0.1));
    CHECK(value >= 1.0);
  }
}

TEST_CASE("the dropped expansion term is exposed behind the flag") {
  const InitialState tilted = InitialState::make(1.0, 0.0);
  const double spin = 1000.0, gamma = 0.3, tau = 5e-3;
  const double base = xi2_short_time(spin, tilted, gamma, tau);
  const double full = xi2_short_time(spin, tilted, gamma, tau, true);
  const double b = decay_exponent(spin, tilted, gamma, tau);
  const double c0 = tilted.cos_theta0();
  CHECK(full - base ==
        doctest::Approx(1.5 * c0 * c0 * b * (1.0 - 5.0 * b / 3.0))
            .epsilon(1e-10));
  // on the equator the term vanishes identically
  CHECK(xi2_short_time(spin, kEquator, gamma, tau, true) ==
        xi2_short_time(spin, kEquator, gamma, tau));
}

TEST_CASE("regime classification boundaries") {
  const double spin = 1e5;
  CHECK(classify_regime(spin, kEquator, 1e-3).kind ==
        RegimeKind::Negligible);
  CHECK(classify_regime(spin, kEquator, 1.0).kind == RegimeKind::Moderate);
  CHECK(classify_regime(spin, kEquator, 1e3).kind == RegimeKind::Strong);
  CHECK(classify_regime(spin, kEquator, 0.0).kind == RegimeKind::Negligible);
  const auto regime = classify_regime(spin, kEquator, 1.0);
  CHECK(regime.lower_exponent == -0.5);
  CHECK(regime.upper_exponent == 0.5);

  // tilted initial state uses the narrower boundaries
  const InitialState tilted = InitialState::make(kPi / 4, 0.0);
  const auto tilted_regime = classify_regime(spin, tilted, 1.0);
  CHECK(tilted_regime.lower_exponent == doctest::Approx(-1.0 / 3.0));
  CHECK(tilted_regime.upper_exponent == 0.25);
  CHECK(classify_regime(spin, tilted, 30.0).kind == RegimeKind::Strong);
  CHECK(classify_regime(spin, tilted, 1e-4).kind == RegimeKind::Negligible);
}

TEST_CASE("approximate observables converge to the exact ones at small tau") {
  const ModelParams p{1000.0, 0.0};
  // |<S_+>| within 0.5% at tau = 5e-3
  const auto approx = approx_observables(p.spin, kEquator, p.gamma, 5e-3);
  const auto exact = full_observables(p, kEquator, 5e-3);
  CHECK(rel_dev(approx.splus.magnitude(), exact.splus.magnitude()) < 5e-3);
  // equatorial azimuth is not rotated
  CHECK(approx.splus.arg == doctest::Approx(kEquator.phi0).epsilon(1e-9));

  // relative error of all transverse moments shrinks with tau
  const InitialState tilted = InitialState::make(1.1, 0.6);
  double previous = 1.0;
  for (const double tau : {2e-2, 1e-2, 5e-3, 2.5e-3}) {
    const auto a = approx_observables(500.0, tilted, 0.5, tau);
    const auto e = full_observables({500.0, 0.5}, tilted, tau);
    const double dev = rel_dev(a.splus_c(), e.splus_c());
    CHECK(dev < previous);
    previous = dev;
  }
}
