#include <cmath>
#include <complex>
#include <numbers>

#include "doctest.h"
#include "oatsq/closed_form.hpp"
#include "support/helpers.hpp"

using namespace oatsq;
using test_support::Rng;
using test_support::rel_dev;

namespace {
constexpr double kPi = std::numbers::pi;

ModelParams params(double spin, double gamma) { return {spin, gamma}; }
}  // namespace

TEST_CASE("twist factor: equatorial state has a real factor") {
  const auto r = twist_factor(kPi / 2, 0.3);
  CHECK(r.log_mag == doctest::Approx(std::log(std::cos(0.3))).epsilon(1e-14));
  CHECK(std::abs(r.arg) < 1e-15);
}

TEST_CASE("twist factor: pole state gives a pure phase") {
  const auto r = twist_factor(0.0, 0.7);
  CHECK(std::abs(r.log_mag) < 1e-15);
  CHECK(r.arg == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("twist factor matches a direct cartesian evaluation") {
  const auto r = twist_factor(kPi / 3, 0.2);
  const std::complex<double> direct(std::cos(0.2),
                                    std::cos(kPi / 3) * std::sin(0.2));
  CHECK(r.log_mag ==
        doctest::Approx(std::log(std::abs(direct))).epsilon(1e-13));
  CHECK(r.arg == doctest::Approx(std::arg(direct)).epsilon(1e-13));
}

TEST_CASE("twist factor argument is continuous across tau = pi/2") {
  // Independent winding reference: unwrap atan2 of the cartesian factor
  // along a fine walk in tau.
  for (const double theta0 : {0.8, 2.6}) {
    double unwrapped = 0.0;
    double prev = 0.0;
    const int steps = 4000;
    const double tau_max = 4.0;
    for (int i = 1; i <= steps; ++i) {
      const double tau = tau_max * i / steps;
      const double raw = std::atan2(std::cos(theta0) * std::sin(tau),
                                    std::cos(tau));
      double delta = raw - prev;
      while (delta > kPi) delta -= 2.0 * kPi;
      while (delta < -kPi) delta += 2.0 * kPi;
      unwrapped += delta;
      prev = raw;
      if (i % 400 == 0) {
        CAPTURE(theta0);
        CAPTURE(tau);
        CHECK(twist_factor(theta0, tau).arg ==
              doctest::Approx(unwrapped).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("conserved moments") {
  CHECK(expect_sz(1000.0, InitialState::make(kPi / 2, 0.0)) ==
        doctest::Approx(0.0).scale(1000.0).epsilon(1e-15));
  CHECK(expect_sz(1000.0, InitialState::make(0.0, 0.0)) == 1000.0);
  CHECK(expect_sz(5.0, InitialState::make(kPi / 3, 0.0)) ==
        doctest::Approx(2.5).epsilon(1e-14));
  CHECK(expect_sz2(1000.0, InitialState::make(kPi / 2, 0.0)) ==
        doctest::Approx(500.0).epsilon(1e-13));
  CHECK(expect_sz2(2.0, InitialState::make(0.0, 0.0)) == 4.0);
}

TEST_CASE("transverse moments at tau = 0") {
  const auto eq = InitialState::make(kPi / 2, 0.0);
  CHECK(rel_dev(expect_splus(params(2, 0), eq, 0.0).to_complex(), {2.0, 0.0}) <
        1e-14);
  // S(S-1/2) at tau=0 for any gamma
  CHECK(rel_dev(expect_splus2(params(2, 3.7), eq, 0.0).to_complex(),
                {3.0, 0.0}) < 1e-14);
  // S=1: direct 3x3 Dicke-basis evaluation gives <S_+^2> = 1/2
  CHECK(rel_dev(expect_splus2(params(1, 0), eq, 0.0).to_complex(),
                {0.5, 0.0}) < 1e-14);
  // both bracket terms vanish on the equator at tau=0
  CHECK(std::abs(expect_splus_z(params(2, 0), eq, 0.0).to_complex()) < 1e-14);
  // pole state has no transverse coherence at any time
  CHECK(expect_splus_z(params(2, 0), InitialState::make(0.0, 0.0), 0.4)
            .is_zero());
}

TEST_CASE("dephasing factorizes out of |<S_+>| exactly") {
  const auto eq = InitialState::make(kPi / 2, 0.0);
  const double tau = 0.01;
  const auto damped = expect_splus(params(1000, 1), eq, tau);
  const auto free = expect_splus(params(1000, 0), eq, tau);
  CHECK(damped.log_mag == doctest::Approx(free.log_mag - tau).epsilon(1e-14));
}

TEST_CASE("dephasing factorization e^{-gamma l^2 tau} for l <= 4") {
  Rng rng(11);
  for (int k = 0; k < 60; ++k) {
    const double spin = rng.half_integer_spin(2.0, 20.0);
    const auto init = InitialState::make(rng.uniform(0.05, kPi - 0.05),
                                         rng.uniform(0.0, 2 * kPi));
    const double gamma = rng.uniform(0.0, 3.0);
    const double tau = rng.uniform(0.0, 0.5);
    for (int l = 1; l <= 4 && l <= 2 * spin; ++l) {
      const auto with = expect_splus_l(params(spin, gamma), init, tau, l);
      const auto without = expect_splus_l(params(spin, 0.0), init, tau, l);
      if (without.is_zero()) {
        CHECK(with.is_zero());
        continue;
      }
      const auto predicted = without.scaled_by_log(-gamma * l * l * tau);
      CHECK(rel_dev(with.to_complex(), predicted.to_complex()) < 1e-12);
    }
  }
}

TEST_CASE("general moment agrees with the dedicated l=1 and l=2 forms") {
  Rng rng(13);
  for (int k = 0; k < 40; ++k) {
    const double spin = rng.half_integer_spin(1.0, 50.0);
    const auto init = InitialState::make(rng.uniform(0.05, kPi - 0.05),
                                         rng.uniform(0.0, 2 * kPi));
    const ModelParams p{spin, rng.uniform(0.0, 2.0)};
    const double tau = rng.uniform(0.0, 0.4);
    CHECK(rel_dev(expect_splus_l(p, init, tau, 1).to_complex(),
                  expect_splus(p, init, tau).to_complex()) < 1e-12);
    CHECK(rel_dev(expect_splus_l(p, init, tau, 2).to_complex(),
                  expect_splus2(p, init, tau).to_complex()) < 1e-12);
  }
}

TEST_CASE("moment order is range-checked") {
  const auto init = InitialState::make(1.0, 0.0);
  CHECK_THROWS_AS(expect_splus_l(params(2, 0), init, 0.1, 5), Error);
  CHECK_THROWS_AS(expect_splus_l(params(2, 0), init, 0.1, 0), Error);
  CHECK_NOTHROW(expect_splus_l(params(2, 0), init, 0.1, 4));
}

TEST_CASE("derivative identity: <S_+(2S_z+1)> = -i e^{-gamma tau} d<S_+>_0/dtau") {
  const double spin = 6.0;
  const auto init = InitialState::make(1.1, 0.4);
  const double tau = 0.13;
  const double gamma = 0.7;
  const double h = 1e-6;
  const auto plus = expect_splus(params(spin, 0.0), init, tau + h).to_complex();
  const auto minus =
      expect_splus(params(spin, 0.0), init, tau - h).to_complex();
  const std::complex<double> derivative = (plus - minus) / (2.0 * h);
  const std::complex<double> expected =
      std::complex<double>(0.0, -1.0) * std::exp(-gamma * tau) * derivative;
  const auto direct = expect_splus_z(params(spin, gamma), init, tau);
  CHECK(rel_dev(direct.to_complex(), expected) < 1e-8);
}

TEST_CASE("phase of <S_+> follows the accumulated twisting angle") {
  Rng rng(17);
  for (int k = 0; k < 25; ++k) {
    const double spin = rng.half_integer_spin(1.0, 30.0);
    const double theta0 = rng.uniform(0.1, kPi - 0.1);
    const double phi0 = rng.uniform(0.0, 2 * kPi);
    const double tau = rng.uniform(0.0, 1.2);
    const auto splus =
        expect_splus(params(spin, 0.3), InitialState::make(theta0, phi0), tau);
    const double expected =
        phi0 + (2.0 * spin - 1.0) * twist_factor(theta0, tau).arg;
    CHECK(splus.arg == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("conservation: <S_z> and <S_z^2> ignore tau and gamma") {
  Rng rng(19);
  const auto init = InitialState::make(0.9, 1.3);
  const ModelParams p{40.0, 0.8};
  const auto ref = full_observables(p, init, 0.0);
  for (int k = 0; k < 100; ++k) {
    const auto obs = full_observables(p, init, rng.uniform(0.0, 3.0));
    CHECK(obs.sz == ref.sz);
    CHECK(obs.sz2 == ref.sz2);
  }
}

TEST_CASE("strong-dephasing limit kills the transverse moments only") {
  const auto init = InitialState::make(1.0, 0.5);
  const auto obs = full_observables(params(10, 1e8), init, 0.1);
  CHECK(std::abs(obs.splus_c()) == 0.0);
  CHECK(std::abs(obs.splus2_c()) == 0.0);
  CHECK(std::abs(obs.splus_z_c()) == 0.0);
  CHECK(obs.sz == expect_sz(10, init));
  CHECK(obs.sz2 == expect_sz2(10, init));
}

TEST_CASE("full observables stay finite at S = 10^6 over tau in [0, 1]") {
  const ModelParams p{1e6, 0.0};
  const auto eq = InitialState::make(kPi / 2, 0.0);
  for (const double tau : {0.0, 1e-4, 0.01, 0.1, 0.5, 1.0}) {
    const auto obs = full_observables(p, eq, tau);
    CHECK(std::isfinite(obs.sz));
    CHECK(std::isfinite(obs.sz2));
    for (const auto& moment : {obs.splus, obs.splus2, obs.splus_z}) {
      CHECK_FALSE(std::isnan(moment.arg));
      CHECK_FALSE(std::isnan(moment.log_mag));
      CHECK(moment.log_mag < 1e308);  // never +inf
      const auto z = moment.to_complex();
      CHECK(std::isfinite(z.real()));
      CHECK(std::isfinite(z.imag()));
    }
  }
}

TEST_CASE("observable bounds hold on random draws") {
  Rng rng(23);
  for (int k = 0; k < 200; ++k) {
    const double spin = rng.half_integer_spin(0.5, 60.0);
    const auto init = InitialState::make(rng.uniform(0.0, kPi),
                                         rng.uniform(0.0, 2 * kPi));
    const ModelParams p{spin, rng.uniform(0.0, 4.0)};
    const auto obs = full_observables(p, init, rng.uniform(0.0, 1.0));
    CHECK(std::abs(obs.splus_c()) <= spin * (1.0 + 1e-12));
    CHECK(obs.sz <= spin * (1.0 + 1e-12));
    CHECK(obs.sz >= -spin * (1.0 + 1e-12));
    CHECK(obs.sz2 >= -1e-12);
    CHECK(obs.sz2 <= spin * spin * (1.0 + 1e-12));
    CHECK(obs.sz2 + 1e-9 >= obs.sz * obs.sz);
  }
}
