#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "doctest.h"
#include "sigzero/errors.hpp"
#include "sigzero/kernels.hpp"
#include "sigzero/quadrature.hpp"
#include "sigzero/signals.hpp"

using namespace sigzero;
using cd = std::complex<double>;

namespace {

// ---- oracles ---------------------------------------------------------------

// K^(j)(x) = i^j int_0^1 u^j e^{iux} du straight from the definition.
cd k_oracle(int j, double x) {
  const auto re = integrate(
      [&](double u) { return std::pow(u, j) * std::cos(u * x); }, 0.0, 1.0, 1e-14);
  const auto im = integrate(
      [&](double u) { return std::pow(u, j) * std::sin(u * x); }, 0.0, 1.0, 1e-14);
  const cd base{re, im};
  switch (j) {
    case 0:
      return base;
    case 1:
      return cd{0.0, 1.0} * base;
    default:
      return -base;
  }
}

// plain-double Riemann sum, no compensation: an independent re-derivation
cd kn_oracle(int j, long n, double x) {
  cd acc{0.0, 0.0};
  for (long k = 1; k <= n; ++k) {
    const double kn = static_cast<double>(k) / static_cast<double>(n);
    acc += std::pow(kn, j) * std::polar(1.0, kn * x);
  }
  acc /= static_cast<double>(n);
  if (j == 1) return cd{0.0, 1.0} * acc;
  if (j == 2) return -acc;
  return acc;
}

const PeriodicFunction& triangle() {
  static const PeriodicFunction f =
      PeriodicFunction::pwl({0.0, kPi, kTwoPi}, {1.0, -1.0, 1.0});
  return f;
}

}  // namespace

TEST_CASE("limit kernel values at zero") {
  CHECK(std::abs(k_eval(0, 0.0) - cd{1.0, 0.0}) < 1e-16);
  CHECK(std::abs(k_eval(1, 0.0) - cd{0.0, 0.5}) < 1e-16);
  CHECK(std::abs(k_eval(2, 0.0) - cd{-1.0 / 3.0, 0.0}) < 1e-16);
  CHECK_THROWS_AS(k_eval(3, 1.0), ConfigError);
}

TEST_CASE("limit kernel against the quadrature oracle, both sides of the series switch") {
  const double xs[] = {1e-12, 1e-8,  1e-4, 0.01,  0.3,  0.499999, 0.500001, 0.75,
                       2.0,   5.5,   10.0, 37.3,  300.0};
  for (int j = 0; j <= 2; ++j)
    for (double ax : xs)
      for (double x : {ax, -ax}) {
        CAPTURE(j);
        CAPTURE(x);
        CHECK(std::abs(k_eval(j, x) - k_oracle(j, x)) < 5e-13);
      }
}

TEST_CASE("limit kernel explicit closed forms") {
  for (double u : {0.3, 1.7, 4.0, 11.0}) {
    // Re K(u) = sin(u)/u, Re K''(u) = -sin/u - 2cos/u^2 + 2sin/u^3
    CHECK(std::abs(k_eval(0, u).real() - std::sin(u) / u) < 1e-14);
    const double want2 = -std::sin(u) / u - 2.0 * std::cos(u) / (u * u) +
                         2.0 * std::sin(u) / (u * u * u);
    CHECK(std::abs(k_eval(2, u).real() - want2) < 1e-14);
  }
  // conjugate symmetry K^(j)(-x) relative to K^(j)(x)
  for (double x : {0.2, 3.1}) {
    CHECK(std::abs(k_eval(0, -x) - std::conj(k_eval(0, x))) < 1e-15);
    CHECK(std::abs(k_eval(1, -x) + std::conj(k_eval(1, x))) < 1e-15);
    CHECK(std::abs(k_eval(2, -x) - std::conj(k_eval(2, x))) < 1e-15);
  }
}

TEST_CASE("Riemann kernel closed form matches the direct sum") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> ux(-40.0, 40.0);
  for (long n : {1L, 2L, 3L, 10L, 137L, 1000L, 32768L}) {
    for (int rep = 0; rep < 40; ++rep) {
      const double x = ux(rng);
      for (int j = 0; j <= 2; ++j) {
        CAPTURE(n);
        CAPTURE(x);
        CAPTURE(j);
        const cd d = kn_eval(j, n, x, KnMethod::direct);
        const cd c = kn_eval(j, n, x, KnMethod::closed);
        CHECK(std::abs(d - c) < 1e-10);
        CHECK(std::abs(d - kn_oracle(j, n, x)) < 1e-9 * (n > 1000 ? 10.0 : 1.0));
      }
    }
  }
}

TEST_CASE("Riemann kernel special points") {
  for (long n : {1L, 7L, 4096L}) {
    const double dn = static_cast<double>(n);
    // x = 0: averages of (k/n)^j
    CHECK(std::abs(kn_eval(0, n, 0.0, KnMethod::closed) - cd{1.0, 0.0}) < 1e-14);
    CHECK(std::abs(kn_eval(1, n, 0.0, KnMethod::closed) - cd{0.0, (dn + 1.0) / (2.0 * dn)}) <
          1e-14);
    const double want2 = (dn + 1.0) * (2.0 * dn + 1.0) / (6.0 * dn * dn);
    CHECK(std::abs(kn_eval(2, n, 0.0, KnMethod::closed) - cd{-want2, 0.0}) < 1e-14);
    // x = 2*pi*n is a removable singularity of the closed form: every
    // summand is e^{2pi i k} = 1
    CHECK(std::abs(kn_eval(0, n, kTwoPi * dn, KnMethod::closed) - cd{1.0, 0.0}) < 1e-9);
  }
}

TEST_CASE("Riemann kernel magnitude bound and convergence rate") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> ux(0.05, 30.0);
  for (int rep = 0; rep < 60; ++rep) {
    const double x = ux(rng);
    for (long n : {10L, 100L, 1000L}) {
      const double dn = static_cast<double>(n);
      const cd v = kn_eval(0, n, x, KnMethod::closed);
      const double cap = 1.0 / (dn * std::abs(std::sin(x / (2.0 * dn))));
      CHECK(std::abs(v) <= std::min(1.0, cap) + 1e-12);
      for (int j = 0; j <= 2; ++j) {
        const double gap = std::abs(kn_eval(j, n, x, KnMethod::direct) - k_eval(j, x));
        CHECK(gap <= 2.0 * (j + std::abs(x) + 1.0) / dn);
      }
    }
  }
}

TEST_CASE("ergodic averages: tiny-n hand check") {
  const auto& f = triangle();
  const auto g = PeriodicFunction::cosine();
  // n = 1: single term k = 1
  for (double t : {0.0, 0.7, 2.9})
    for (double s : {0.1, 1.9}) {
      const double want_c = g.eval(3.0 + t) * g.eval(3.0 + s);
      CHECK(std::abs(ergodic_sum(ErgodicKind::C, g, g, s, t, 1, 3) - want_c) < 1e-13);
      const double want_e = f.eval(5.0 + t) * f.eval_derivative(5.0 + s);
      CHECK(std::abs(ergodic_sum(ErgodicKind::E, f, f, s, t, 1, 5) - want_e) < 1e-13);
    }
  // n = 4, p_n = 2: explicit 4-term re-derivation
  const double t = 1.3, s = 0.4;
  double c = 0.0, d = 0.0, e = 0.0;
  for (long k = 1; k <= 4; ++k) {
    const double kn = k / 4.0;
    const double at = kn * (2.0 + t), as = kn * (2.0 + s);
    c += f.eval(at) * f.eval(as);
    d += kn * kn * f.eval_derivative(at) * f.eval_derivative(as);
    e += kn * f.eval(at) * f.eval_derivative(as);
  }
  CHECK(std::abs(ergodic_sum(ErgodicKind::C, f, f, s, t, 4, 2) - c / 4.0) < 1e-13);
  CHECK(std::abs(ergodic_sum(ErgodicKind::D, f, f, s, t, 4, 2) - d / 4.0) < 1e-13);
  CHECK(std::abs(ergodic_sum(ErgodicKind::E, f, f, s, t, 4, 2) - e / 4.0) < 1e-13);
}

TEST_CASE("ergodic limits: closed forms and symmetry") {
  const auto cos_spec = PeriodicFunction::cosine().fourier_spectrum(4);
  for (double u : {0.3, 1.1, 2.7, 6.9}) {
    CHECK(std::abs(ergodic_limit(ErgodicKind::C, cos_spec, cos_spec, u) -
                   std::sin(u) / (2.0 * u)) < 1e-13);
  }
  CHECK(std::abs(ergodic_limit(ErgodicKind::C, cos_spec, cos_spec, 0.0) - 0.5) < 1e-15);
  CHECK(std::abs(ergodic_limit(ErgodicKind::D, cos_spec, cos_spec, 0.0) - 1.0 / 6.0) < 1e-15);
  CHECK(std::abs(ergodic_limit(ErgodicKind::E, cos_spec, cos_spec, 0.0)) < 1e-15);

  // limits tie to the covariance derivatives of the same truncation:
  //   C -> rho(u), D -> -rho''(u), E -> -rho'(u)
  const CovarianceModel model(triangle(), 64);
  const auto spec = triangle().fourier_spectrum(64);
  for (double u : {-2.4, -0.9, 0.0, 0.4, 1.7, 3.0}) {
    CAPTURE(u);
    CHECK(std::abs(ergodic_limit(ErgodicKind::C, spec, spec, u) - model.rho(0, u)) < 1e-12);
    CHECK(std::abs(ergodic_limit(ErgodicKind::D, spec, spec, u) + model.rho(2, u)) < 1e-12);
    CHECK(std::abs(ergodic_limit(ErgodicKind::E, spec, spec, u) + model.rho(1, u)) < 1e-12);
  }
}

TEST_CASE("ergodic sums approach their limits along the golden frequency sequence") {
  const auto g = PeriodicFunction::cosine();
  const auto spec = g.fourier_spectrum(4);
  const FrequencySequence freq = FrequencySequence::golden();
  const long n = 4000;
  const long pn = freq.pn(n);
  CHECK(pn == 7766);  // floor(4000 * pi * (sqrt 5 - 1) / 2)
  for (double s : {0.0, 0.8})
    for (double t : {0.3, 1.9, 2.8}) {
      const double u = t - s;
      CHECK(std::abs(ergodic_sum(ErgodicKind::C, g, g, s, t, n, pn) -
                     ergodic_limit(ErgodicKind::C, spec, spec, u)) < 0.01);
      CHECK(std::abs(ergodic_sum(ErgodicKind::D, g, g, s, t, n, pn) -
                     ergodic_limit(ErgodicKind::D, spec, spec, u)) < 0.01);
      CHECK(std::abs(ergodic_sum(ErgodicKind::E, g, g, s, t, n, pn) -
                     ergodic_limit(ErgodicKind::E, spec, spec, u)) < 0.01);
    }
}

TEST_CASE("covariance model: single-time moments and series consistency") {
  const CovarianceModel model(PeriodicFunction::cosine(), 8);
  CHECK(model.f_energy() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(model.fprime_energy() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(model.rho(0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(model.rho(1, 0.0)) < 1e-15);
  CHECK(model.rho(2, 0.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-14));
  for (double u : {0.4, 1.3, 5.0}) {
    CHECK(std::abs(model.rho(0, u) - std::sin(u) / (2.0 * u)) < 1e-14);
    CHECK(std::abs(model.rho(0, u) - model.rho(0, -u)) < 1e-15);   // even
    CHECK(std::abs(model.rho(1, u) + model.rho(1, -u)) < 1e-15);   // odd
    CHECK(std::abs(model.rho(2, u) - model.rho(2, -u)) < 1e-15);   // even
  }
}

TEST_CASE("covariance derivatives consistent under finite differences") {
  const CovarianceModel model(triangle(), 256);
  const double h = 1e-5;
  for (double u : {0.3, 0.9, 2.2}) {
    const double fd1 = (model.rho(0, u + h) - model.rho(0, u - h)) / (2.0 * h);
    CHECK(std::abs(fd1 - model.rho(1, u)) < 1e-7);
    const double fd2 = (model.rho(1, u + h) - model.rho(1, u - h)) / (2.0 * h);
    CHECK(std::abs(fd2 - model.rho(2, u)) < 1e-6);
  }
}

TEST_CASE("second-derivative gap: quadrature route equals the series difference") {
  for (int max_p : {64, 512}) {
    const CovarianceModel model(triangle(), max_p);
    for (double t : {0.01, 0.1, 0.5, 1.0, 3.0}) {
      CAPTURE(max_p);
      CAPTURE(t);
      const double series = model.rho(2, t) - model.rho(2, 0.0);
      const double quad = model.rho2_gap(t);
      CHECK(std::abs(series - quad) < 1e-9);
      CHECK(quad > 0.0);
      CHECK(std::abs(model.rho2_gap(-t) - quad) < 1e-12);  // even in t
    }
    CHECK(model.rho2_gap(0.0) == 0.0);
  }
}

TEST_CASE("covariance matrix: block layout, pinned diagonal, positive semidefinite") {
  const CovarianceModel model(triangle(), 128);
  const std::vector<double> times{0.0, 0.45, 0.9, 1.35};  // uniform grid
  const auto cov = model.cov_matrix(times);
  const std::size_t m = times.size();
  REQUIRE(cov.size() == 2 * m);

  for (std::size_t i = 0; i < m; ++i) {
    CHECK(cov[i][i] == model.f_energy());
    CHECK(cov[m + i][m + i] == model.fprime_energy() / 3.0);
    CHECK(cov[i][m + i] == 0.0);
  }
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j) CHECK(cov[i][j] == cov[j][i]);

  // index-difference fast path must agree with the series definition
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j) {
      const double u = times[j] - times[i];
      CHECK(std::abs(cov[i][j] - model.rho(0, u)) < 1e-12);
      CHECK(std::abs(cov[i][m + j] - model.rho(1, u)) < 1e-12);
      CHECK(std::abs(cov[m + i][j] + model.rho(1, u)) < 1e-12);
      CHECK(std::abs(cov[m + i][m + j] + model.rho(2, u)) < 1e-12);
    }

  // non-uniform grid goes through the general path; same layout rules
  const std::vector<double> times2{0.0, 0.3, 1.0};
  const auto cov2 = model.cov_matrix(times2);
  CHECK(std::abs(cov2[0][1] - model.rho(0, 0.3)) < 1e-15);
  CHECK(std::abs(cov2[1][3 + 2] - model.rho(1, 0.7)) < 1e-15);

  // PSD check via Gershgorin-free eigen decomposition
  Eigen::MatrixXd M(2 * m, 2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j) M(static_cast<Eigen::Index>(i),
                                              static_cast<Eigen::Index>(j)) = cov[i][j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);

  CHECK_THROWS_AS(model.cov_matrix({0.1, 0.1}), ConfigError);
  CHECK_THROWS_AS(model.cov_matrix({}), ConfigError);
}

TEST_CASE("ergodic sums respect the covariance cross-identities at finite n") {
  // E[X(s) X'(t)] comes from the E-kind average with swapped arguments;
  // check the n -> infinity identification numerically at n = 2000.
  const auto& f = triangle();
  const CovarianceModel model(f, 512);
  const FrequencySequence freq = FrequencySequence::golden();
  const long n = 2000;
  const long pn = freq.pn(n);
  const double s = 0.2, t = 1.4, u = t - s;
  // C approx rho(u)
  CHECK(std::abs(ergodic_sum(ErgodicKind::C, f, f, s, t, n, pn) - model.rho(0, u)) < 0.02);
  // D approx -rho''(u)
  CHECK(std::abs(ergodic_sum(ErgodicKind::D, f, f, s, t, n, pn) + model.rho(2, u)) < 0.02);
  // E approx -rho'(u)
  CHECK(std::abs(ergodic_sum(ErgodicKind::E, f, f, s, t, n, pn) + model.rho(1, u)) < 0.02);
}
