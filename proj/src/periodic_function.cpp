#include "sigzero/periodic_function.hpp"

#include <algorithm>
#include <cmath>

#include "sigzero/errors.hpp"

namespace sigzero {

namespace {

constexpr double kEndpointSnapTol = 1e-9;

}  // namespace

PiecewiseLinearPeriodic::PiecewiseLinearPeriodic(std::vector<double> knots_,
                                                 std::vector<double> values_)
    : knots(std::move(knots_)), values(std::move(values_)) {
  if (knots.size() < 3)
    throw ConfigError("knots", "need at least one interior knot (0 and 2pi plus one more)");
  if (values.size() != knots.size())
    throw ConfigError("values", "length must match knots");
  if (std::abs(knots.front()) > kEndpointSnapTol)
    throw ConfigError("knots", "first knot must be 0");
  if (std::abs(knots.back() - kTwoPi) > kEndpointSnapTol)
    throw ConfigError("knots", "last knot must be 2pi");
  knots.front() = 0.0;
  knots.back() = kTwoPi;
  for (std::size_t j = 0; j + 1 < knots.size(); ++j)
    if (!(knots[j] < knots[j + 1]))
      throw ConfigError("knots", "must be strictly increasing");
  if (values.front() != values.back())
    throw ConfigError("values", "first and last value must match (periodicity)");
  const auto [mn, mx] = std::minmax_element(values.begin(), values.end());
  if (*mn == *mx) throw ConfigError("values", "function must not be constant");

  slopes.resize(knots.size() - 1);
  for (std::size_t j = 0; j + 1 < knots.size(); ++j)
    slopes[j] = (values[j + 1] - values[j]) / (knots[j + 1] - knots[j]);
}

int PiecewiseLinearPeriodic::cell_of(double r) const {
  auto it = std::upper_bound(knots.begin() + 1, knots.end(), r);
  int j = static_cast<int>(it - knots.begin()) - 1;
  if (j >= num_cells()) j = num_cells() - 1;
  if (j < 0) j = 0;
  return j;
}

double PiecewiseLinearPeriodic::eval_reduced(double r) const {
  const int j = cell_of(r);
  return values[j] + slopes[j] * (r - knots[j]);
}

double PiecewiseLinearPeriodic::deriv_reduced(double r) const { return slopes[cell_of(r)]; }

double PiecewiseLinearPeriodic::slope_jump(int j) const {
  return j == 0 ? slopes.front() - slopes.back() : slopes[j] - slopes[j - 1];
}

HarmonicFunction::HarmonicFunction(std::vector<double> cos_, std::vector<double> sin_)
    : cos_coeffs(std::move(cos_)), sin_coeffs(std::move(sin_)) {
  if (cos_coeffs.empty() && sin_coeffs.empty())
    throw ConfigError("cos", "harmonic function needs coefficients");
  if (!sin_coeffs.empty() && sin_coeffs[0] != 0.0)
    throw ConfigError("sin", "sin coefficient at frequency 0 must be 0");
  if (band() < 1)
    throw ConfigError("cos", "function must not be constant (needs a frequency >= 1 term)");
}

int HarmonicFunction::band() const {
  int b = 0;
  for (std::size_t p = 1; p < cos_coeffs.size(); ++p)
    if (cos_coeffs[p] != 0.0) b = static_cast<int>(p);
  for (std::size_t p = 1; p < sin_coeffs.size(); ++p)
    if (sin_coeffs[p] != 0.0) b = std::max(b, static_cast<int>(p));
  return b;
}

PeriodicFunction PeriodicFunction::pwl(std::vector<double> knots, std::vector<double> values) {
  return PeriodicFunction(PiecewiseLinearPeriodic(std::move(knots), std::move(values)));
}

PeriodicFunction PeriodicFunction::harmonic(std::vector<double> cos_coeffs,
                                            std::vector<double> sin_coeffs) {
  return PeriodicFunction(HarmonicFunction(std::move(cos_coeffs), std::move(sin_coeffs)));
}

PeriodicFunction PeriodicFunction::cosine() { return harmonic({0.0, 1.0}, {0.0, 0.0}); }

double PeriodicFunction::eval(double x) const { return eval_reduced(reduce_two_pi(x)); }

double PeriodicFunction::eval_derivative(double x) const {
  return deriv_reduced(reduce_two_pi(x));
}

double PeriodicFunction::eval_reduced(double r) const {
  if (const auto* w = std::get_if<PiecewiseLinearPeriodic>(&impl_)) return w->eval_reduced(r);
  const auto& h = std::get<HarmonicFunction>(impl_);
  double acc = h.cos_coeffs.empty() ? 0.0 : h.cos_coeffs[0];
  const std::size_t nc = h.cos_coeffs.size(), ns = h.sin_coeffs.size();
  for (std::size_t p = 1; p < std::max(nc, ns); ++p) {
    const double c = p < nc ? h.cos_coeffs[p] : 0.0;
    const double s = p < ns ? h.sin_coeffs[p] : 0.0;
    if (c == 0.0 && s == 0.0) continue;
    const double pr = static_cast<double>(p) * r;
    acc += c * std::cos(pr) + s * std::sin(pr);
  }
  return acc;
}

double PeriodicFunction::deriv_reduced(double r) const {
  if (const auto* w = std::get_if<PiecewiseLinearPeriodic>(&impl_)) return w->deriv_reduced(r);
  const auto& h = std::get<HarmonicFunction>(impl_);
  double acc = 0.0;
  const std::size_t nc = h.cos_coeffs.size(), ns = h.sin_coeffs.size();
  for (std::size_t p = 1; p < std::max(nc, ns); ++p) {
    const double c = p < nc ? h.cos_coeffs[p] : 0.0;
    const double s = p < ns ? h.sin_coeffs[p] : 0.0;
    if (c == 0.0 && s == 0.0) continue;
    const double dp = static_cast<double>(p);
    const double pr = dp * r;
    acc += -dp * c * std::sin(pr) + dp * s * std::cos(pr);
  }
  return acc;
}

FourierSpectrum PeriodicFunction::fourier_spectrum(int max_p) const {
  if (max_p < 0) throw ConfigError("max_p", "must be >= 0");
  FourierSpectrum sp;
  sp.max_p = max_p;
  sp.coeffs.assign(static_cast<std::size_t>(max_p) + 1, {0.0, 0.0});

  if (const auto* w = std::get_if<PiecewiseLinearPeriodic>(&impl_)) {
    NeumaierSum mean;
    for (std::size_t j = 0; j + 1 < w->knots.size(); ++j)
      mean.add((w->knots[j + 1] - w->knots[j]) * 0.5 * (w->values[j] + w->values[j + 1]));
    sp.coeffs[0] = mean.value() / kTwoPi;
    // f'' is a sum of slope-jump Diracs at the knots, so for p != 0
    //   f_hat(p) = -(1/(2pi p^2)) sum_j (m_j - m_{j-1}) e^{-i p s_j}.
    const int cells = w->num_cells();
    for (int p = 1; p <= max_p; ++p) {
      std::complex<double> acc{0.0, 0.0};
      for (int j = 0; j < cells; ++j)
        acc += w->slope_jump(j) * std::polar(1.0, -static_cast<double>(p) * w->knots[j]);
      sp.coeffs[p] = -acc / (kTwoPi * static_cast<double>(p) * static_cast<double>(p));
    }
    double jump_sum = 0.0;
    for (int j = 0; j < cells; ++j) jump_sum += std::abs(w->slope_jump(j));
    const double c = jump_sum / kTwoPi;
    const double pd = static_cast<double>(max_p);
    sp.tail_energy = max_p == 0 ? 2.0 * c * c * 1.2021  // sum p^-4 < zeta(4)
                                : 2.0 * c * c / (3.0 * pd * pd * pd);
    return sp;
  }

  const auto& h = std::get<HarmonicFunction>(impl_);
  if (!h.cos_coeffs.empty()) sp.coeffs[0] = h.cos_coeffs[0];
  double dropped = 0.0;
  const std::size_t nc = h.cos_coeffs.size(), ns = h.sin_coeffs.size();
  for (std::size_t p = 1; p < std::max(nc, ns); ++p) {
    const double c = p < nc ? h.cos_coeffs[p] : 0.0;
    const double s = p < ns ? h.sin_coeffs[p] : 0.0;
    if (p <= static_cast<std::size_t>(max_p))
      sp.coeffs[p] = {0.5 * c, -0.5 * s};
    else
      dropped += 2.0 * (0.25 * c * c + 0.25 * s * s);
  }
  sp.tail_energy = dropped;
  return sp;
}

namespace {

std::vector<double> merged_knots(const PiecewiseLinearPeriodic& f,
                                 const PiecewiseLinearPeriodic& g) {
  std::vector<double> m;
  m.reserve(f.knots.size() + g.knots.size());
  m.insert(m.end(), f.knots.begin(), f.knots.end());
  m.insert(m.end(), g.knots.begin(), g.knots.end());
  std::sort(m.begin(), m.end());
  m.erase(std::unique(m.begin(), m.end()), m.end());
  return m;
}

double harm_coeff(const HarmonicFunction& h, bool sine, std::size_t p) {
  const auto& v = sine ? h.sin_coeffs : h.cos_coeffs;
  return p < v.size() ? v[p] : 0.0;
}

std::complex<double> pwl_coeff(const PiecewiseLinearPeriodic& w, int p) {
  if (p == 0) {
    NeumaierSum mean;
    for (std::size_t j = 0; j + 1 < w.knots.size(); ++j)
      mean.add((w.knots[j + 1] - w.knots[j]) * 0.5 * (w.values[j] + w.values[j + 1]));
    return {mean.value() / kTwoPi, 0.0};
  }
  std::complex<double> acc{0.0, 0.0};
  for (int j = 0; j < w.num_cells(); ++j)
    acc += w.slope_jump(j) * std::polar(1.0, -static_cast<double>(p) * w.knots[j]);
  return -acc / (kTwoPi * static_cast<double>(p) * static_cast<double>(p));
}

}  // namespace

double inner_product(const PeriodicFunction& f, const PeriodicFunction& g) {
  if (!f.is_pwl() && !g.is_pwl()) {
    const auto& a = f.as_harmonic();
    const auto& b = g.as_harmonic();
    const std::size_t bw = static_cast<std::size_t>(std::max(a.band(), b.band()));
    double acc = harm_coeff(a, false, 0) * harm_coeff(b, false, 0);
    for (std::size_t p = 1; p <= bw; ++p)
      acc += 0.5 * (harm_coeff(a, false, p) * harm_coeff(b, false, p) +
                    harm_coeff(a, true, p) * harm_coeff(b, true, p));
    return acc;
  }
  if (f.is_pwl() && g.is_pwl()) {
    const auto& a = f.as_pwl();
    const auto& b = g.as_pwl();
    const auto m = merged_knots(a, b);
    NeumaierSum acc;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
      const double x0 = m[j], x1 = m[j + 1], xm = 0.5 * (x0 + x1);
      // product of two affine pieces is quadratic; Simpson is exact
      const double q0 = a.eval_reduced(x0) * b.eval_reduced(x0);
      const double qm = a.eval_reduced(xm) * b.eval_reduced(xm);
      const double x1r = (j + 2 == m.size()) ? 0.0 : x1;  // f(2pi) = f(0)
      const double q1 = a.eval_reduced(x1r) * b.eval_reduced(x1r);
      acc.add((x1 - x0) / 6.0 * (q0 + 4.0 * qm + q1));
    }
    return acc.value() / kTwoPi;
  }
  const auto& h = f.is_pwl() ? g.as_harmonic() : f.as_harmonic();
  const auto& w = f.is_pwl() ? f.as_pwl() : g.as_pwl();
  // the harmonic side is band-limited, so the Parseval sum is finite/exact
  double acc = harm_coeff(h, false, 0) * pwl_coeff(w, 0).real();
  for (int p = 1; p <= h.band(); ++p) {
    const std::complex<double> hc{0.5 * harm_coeff(h, false, p),
                                  -0.5 * harm_coeff(h, true, p)};
    acc += 2.0 * (hc * std::conj(pwl_coeff(w, p))).real();
  }
  return acc;
}

double derivative_inner_product(const PeriodicFunction& f, const PeriodicFunction& g) {
  if (!f.is_pwl() && !g.is_pwl()) {
    const auto& a = f.as_harmonic();
    const auto& b = g.as_harmonic();
    const std::size_t bw = static_cast<std::size_t>(std::max(a.band(), b.band()));
    double acc = 0.0;
    for (std::size_t p = 1; p <= bw; ++p)
      acc += 0.5 * static_cast<double>(p) * static_cast<double>(p) *
             (harm_coeff(a, false, p) * harm_coeff(b, false, p) +
              harm_coeff(a, true, p) * harm_coeff(b, true, p));
    return acc;
  }
  if (f.is_pwl() && g.is_pwl()) {
    const auto& a = f.as_pwl();
    const auto& b = g.as_pwl();
    const auto m = merged_knots(a, b);
    NeumaierSum acc;
    for (std::size_t j = 0; j + 1 < m.size(); ++j) {
      const double x0 = m[j], x1 = m[j + 1];
      const double xm = 0.5 * (x0 + x1);
      acc.add(a.deriv_reduced(xm) * b.deriv_reduced(xm) * (x1 - x0));
    }
    return acc.value() / kTwoPi;
  }
  const auto& h = f.is_pwl() ? g.as_harmonic() : f.as_harmonic();
  const auto& w = f.is_pwl() ? f.as_pwl() : g.as_pwl();
  double acc = 0.0;
  for (int p = 1; p <= h.band(); ++p) {
    const std::complex<double> hc{0.5 * harm_coeff(h, false, p),
                                  -0.5 * harm_coeff(h, true, p)};
    acc += 2.0 * static_cast<double>(p) * static_cast<double>(p) *
           (hc * std::conj(pwl_coeff(w, p))).real();
  }
  return acc;
}

double autocorrelation(const PeriodicFunction& f, double x, int max_p) {
  const FourierSpectrum sp = f.fourier_spectrum(max_p);
  NeumaierSum acc;
  acc.add(std::norm(sp.coeffs[0]));
  for (int p = 1; p <= max_p; ++p) {
    const double e = std::norm(sp.coeffs[p]);
    if (e != 0.0) acc.add(2.0 * e * std::cos(static_cast<double>(p) * x));
  }
  return acc.value();
}

}  // namespace sigzero
