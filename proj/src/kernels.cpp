#include "sigzero/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "sigzero/errors.hpp"
#include "sigzero/num.hpp"
#include "sigzero/quadrature.hpp"

namespace sigzero {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// I_j(x) = int_0^1 u^j e^{iux} du. Series for small |x| (closed forms lose
// up to ~eps/x^3 to numerator cancellation), closed forms beyond.
cd moment_integral(int j, double x) {
  if (std::abs(x) < 0.5) {
    const cd a = kI * x;
    cd term{1.0, 0.0};  // a^m / m!
    cd acc{0.0, 0.0};
    for (int m = 0; m < 40; ++m) {
      const cd contrib = term / static_cast<double>(j + m + 1);
      acc += contrib;
      if (std::abs(contrib) < 1e-18) break;
      term *= a / static_cast<double>(m + 1);
    }
    return acc;
  }
  const cd a = kI * x;
  const cd ea = std::polar(1.0, x);
  switch (j) {
    case 0:
      return (ea - 1.0) / a;
    case 1:
      return (ea * (a - 1.0) + 1.0) / (a * a);
    default:
      return (ea * (a * a - 2.0 * a + 2.0) - 2.0) / (a * a * a);
  }
}

}  // namespace

std::complex<double> k_eval(int order, double x) {
  if (order < 0 || order > 2) throw ConfigError("order", "kernel order must be 0, 1 or 2");
  const cd m = moment_integral(order, x);
  switch (order) {
    case 0:
      return m;
    case 1:
      return kI * m;
    default:
      return -m;
  }
}

namespace {

cd kn_direct(int order, long n, double x) {
  const double dn = static_cast<double>(n);
  NeumaierSum re, im;
  for (long k = 1; k <= n; ++k) {
    const double kn = static_cast<double>(k) / dn;
    const double w = order == 0 ? 1.0 : (order == 1 ? kn : kn * kn);
    const double ang = kn * x;
    re.add(w * std::cos(ang));
    im.add(w * std::sin(ang));
  }
  cd s{re.value() / dn, im.value() / dn};
  switch (order) {
    case 0:
      return s;
    case 1:
      return kI * s;
    default:
      return -s;
  }
}

cd kn_closed(int order, long n, double x) {
  const double dn = static_cast<double>(n);
  const double a = (dn + 1.0) / (2.0 * dn);
  const double b = 1.0 / (2.0 * dn);
  const double sb = std::sin(b * x);
  const cd phase = std::polar(1.0, a * x);
  const cd front = phase / (dn * sb);
  const double sh = std::sin(0.5 * x);
  const double ch = std::cos(0.5 * x);
  if (order == 0) return front * sh;
  const double d = std::cos(b * x) / sb;  // cot(x/2n)
  const cd iabd = kI * a - b * d;
  if (order == 1) return front * (sh * iabd + 0.5 * ch);
  const cd bracket =
      sh * (cd{-a * a - 0.25 + b * b + 2.0 * b * b * d * d, 0.0} - 2.0 * kI * (a * b * d)) +
      ch * iabd;
  return front * bracket;
}

}  // namespace

std::complex<double> kn_eval(int order, long n, double x, KnMethod method) {
  if (order < 0 || order > 2) throw ConfigError("order", "kernel order must be 0, 1 or 2");
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (method == KnMethod::direct) return kn_direct(order, n, x);
  const double sb = std::sin(x / (2.0 * static_cast<double>(n)));
  if (std::abs(sb) < 1e-12 || std::abs(x) < 0.01) return kn_direct(order, n, x);
  return kn_closed(order, n, x);
}

double ergodic_sum(ErgodicKind kind, const PeriodicFunction& g, const PeriodicFunction& h,
                   double s, double t, long n, long pn) {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (pn < 0) throw ConfigError("pn", "must be >= 0");
  const double dn = static_cast<double>(n);
  NeumaierSum acc;
  for (long k = 1; k <= n; ++k) {
    const double base = phase_mod_two_pi(k * pn, n);
    const double kn = static_cast<double>(k) / dn;
    const double tt = reduce_two_pi(base + kn * t);
    const double ts = reduce_two_pi(base + kn * s);
    double term;
    switch (kind) {
      case ErgodicKind::C:
        term = g.eval_reduced(tt) * h.eval_reduced(ts);
        break;
      case ErgodicKind::D:
        term = kn * kn * g.deriv_reduced(tt) * h.deriv_reduced(ts);
        break;
      default:
        term = kn * g.eval_reduced(tt) * h.deriv_reduced(ts);
        break;
    }
    acc.add(term);
  }
  return acc.value() / dn;
}

double ergodic_limit(ErgodicKind kind, const FourierSpectrum& g, const FourierSpectrum& h,
                     double u) {
  const int max_p = std::min(g.max_p, h.max_p);
  cd acc{0.0, 0.0};
  for (int p = -max_p; p <= max_p; ++p) {
    const cd gh = g.coeff(p) * h.coeff(-p);
    if (gh == cd{0.0, 0.0}) continue;
    const double dp = static_cast<double>(p);
    cd w;
    switch (kind) {
      case ErgodicKind::C:
        w = k_eval(0, dp * u);
        break;
      case ErgodicKind::D:
        w = -dp * dp * k_eval(2, dp * u);
        break;
      default:
        w = -dp * k_eval(1, dp * u);
        break;
    }
    acc += gh * w;
  }
  if (std::abs(acc.imag()) > 1e-10)
    throw NumericalError("ergodic_limit: imaginary residual " + std::to_string(acc.imag()));
  return acc.real();
}

CovarianceModel::CovarianceModel(PeriodicFunction f, int max_p)
    : f_(std::move(f)),
      spec_(f_.fourier_spectrum(max_p)),
      f_energy_(inner_product(f_, f_)),
      fprime_energy_(derivative_inner_product(f_, f_)) {
  if (spec_.total_energy() <= 0.0)
    throw ConfigError("spectrum_p", "truncated spectrum has no energy");
}

double CovarianceModel::rho(int order, double u) const {
  if (order < 0 || order > 2) throw ConfigError("order", "rho order must be 0, 1 or 2");
  NeumaierSum acc;
  if (order == 0) acc.add(std::norm(spec_.coeffs[0]));
  for (int p = 1; p <= spec_.max_p; ++p) {
    const double e = std::norm(spec_.coeffs[p]);
    if (e == 0.0) continue;
    const double dp = static_cast<double>(p);
    const double pj = order == 0 ? 1.0 : (order == 1 ? dp : dp * dp);
    acc.add(2.0 * e * pj * k_eval(order, dp * u).real());
  }
  return acc.value();
}

double CovarianceModel::rho2_gap(double t) const {
  const double at = std::abs(t);
  if (at == 0.0) return 0.0;
  std::vector<double> e2;  // 2 p^2 |f_hat(p)|^2
  e2.resize(static_cast<std::size_t>(spec_.max_p) + 1, 0.0);
  for (int p = 1; p <= spec_.max_p; ++p)
    e2[p] = 2.0 * static_cast<double>(p) * static_cast<double>(p) * std::norm(spec_.coeffs[p]);
  const auto phi = [&](double s) {
    NeumaierSum acc;
    for (int p = 1; p <= spec_.max_p; ++p) {
      if (e2[p] == 0.0) continue;
      acc.add(e2[p] * (1.0 - std::cos(static_cast<double>(p) * s)));
    }
    return acc.value();
  };
  const double t3 = at * at * at;
  // pre-split into half-periods of the fastest surviving mode; a single
  // adaptive pass over [0, t] can alias the truncation-frequency oscillation
  long cells = static_cast<long>(std::ceil(at * spec_.max_p / kPi));
  cells = std::min(std::max(cells, 1L), 4096L);
  const double tol = 1e-10 * std::max(t3, 1e-12) / static_cast<double>(cells);
  NeumaierSum total;
  for (long c = 0; c < cells; ++c) {
    const double lo = at * static_cast<double>(c) / static_cast<double>(cells);
    const double hi = at * static_cast<double>(c + 1) / static_cast<double>(cells);
    total.add(integrate([&](double s) { return s * s * phi(s); }, lo, hi, tol, 30));
  }
  return total.value() / t3;
}

std::vector<std::vector<double>> CovarianceModel::cov_matrix(
    const std::vector<double>& times) const {
  const std::size_t m = times.size();
  if (m == 0) throw ConfigError("times", "must be non-empty");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if (times[i] == times[j]) throw ConfigError("times", "must be pairwise distinct");

  std::vector<std::vector<double>> cov(2 * m, std::vector<double>(2 * m, 0.0));

  // uniform grids: evaluate the series once per index difference
  bool uniform = m >= 3;
  const double h = m > 1 ? times[1] - times[0] : 0.0;
  for (std::size_t i = 0; i + 1 < m && uniform; ++i)
    if (std::abs((times[i + 1] - times[i]) - h) > 1e-12) uniform = false;

  const auto fill = [&](std::size_t i, std::size_t j, double r0, double r1, double r2) {
    cov[i][j] = r0;
    cov[i][m + j] = r1;    // E[X(t_i) X'(t_j)] = rho'(t_j - t_i)
    cov[m + i][j] = -r1;   // E[X'(t_i) X(t_j)] = -rho'(t_j - t_i)
    cov[m + i][m + j] = -r2;
    cov[j][i] = r0;
    cov[m + j][i] = r1;
    cov[j][m + i] = -r1;
    cov[m + j][m + i] = -r2;
  };

  if (uniform) {
    std::vector<double> r0(m), r1(m), r2(m);
    for (std::size_t k = 1; k < m; ++k) {
      const double u = static_cast<double>(k) * h;
      r0[k] = rho(0, u);
      r1[k] = rho(1, u);
      r2[k] = rho(2, u);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) fill(i, j, r0[j - i], r1[j - i], r2[j - i]);
  } else {
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const double u = times[j] - times[i];
        fill(i, j, rho(0, u), rho(1, u), rho(2, u));
      }
  }
  // exact single-time moments; the truncated-tail correction is positive,
  // so the pinned matrix stays PSD
  for (std::size_t i = 0; i < m; ++i) {
    cov[i][i] = f_energy_;
    cov[m + i][m + i] = fprime_energy_ / 3.0;
    cov[i][m + i] = 0.0;
    cov[m + i][i] = 0.0;
  }
  return cov;
}

}  // namespace sigzero
