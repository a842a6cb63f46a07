#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "sigzero/num.hpp"

namespace sigzero {

// Truncated Fourier data of a real periodic function, convention
//   f_hat(p) = (1/2pi) int_0^{2pi} f(t) e^{-ipt} dt,
// so f_hat(-p) = conj(f_hat(p)).
struct FourierSpectrum {
  int max_p = 0;
  std::vector<std::complex<double>> coeffs;  // index p = 0..max_p
  double tail_energy = 0.0;  // bound on sum_{|p| > max_p} |f_hat(p)|^2

  std::complex<double> coeff(int p) const {
    const int q = p < 0 ? -p : p;
    if (q > max_p) return {0.0, 0.0};
    return p < 0 ? std::conj(coeffs[q]) : coeffs[q];
  }
  double energy(int p) const { return std::norm(coeff(p)); }
  // Parseval partial sum, both signs of p.
  double total_energy() const {
    double e = std::norm(coeffs[0]);
    for (int p = 1; p <= max_p; ++p) e += 2.0 * std::norm(coeffs[p]);
    return e;
  }
};

// Continuous piecewise-linear 2pi-periodic function given by knots
// 0 = s_0 < ... < s_{r+1} = 2pi and values v_0..v_{r+1} with v_0 == v_{r+1}.
struct PiecewiseLinearPeriodic {
  std::vector<double> knots;
  std::vector<double> values;
  std::vector<double> slopes;  // slope on cell [s_j, s_{j+1})

  PiecewiseLinearPeriodic(std::vector<double> knots_, std::vector<double> values_);

  int cell_of(double r) const;  // r in [0, kTwoPi)
  double eval_reduced(double r) const;
  double deriv_reduced(double r) const;  // right-hand slope at knots
  // slope jump when crossing knot j upward: m_j - m_{j-1} (wraps at j = 0)
  double slope_jump(int j) const;
  int num_cells() const { return static_cast<int>(slopes.size()); }
};

// Real trigonometric polynomial sum_p c_p cos(px) + b_p sin(px).
struct HarmonicFunction {
  std::vector<double> cos_coeffs;  // from p = 0
  std::vector<double> sin_coeffs;  // from p = 0; entry 0 must be 0

  HarmonicFunction(std::vector<double> cos_, std::vector<double> sin_);
  int band() const;  // largest p with a nonzero coefficient
};

class PeriodicFunction {
 public:
  static PeriodicFunction pwl(std::vector<double> knots, std::vector<double> values);
  static PeriodicFunction harmonic(std::vector<double> cos_coeffs,
                                   std::vector<double> sin_coeffs);
  static PeriodicFunction cosine();  // f(x) = cos(x)

  double eval(double x) const;
  double eval_derivative(double x) const;  // right-hand slope at pwl knots
  // value/right-derivative for r already reduced into [0, kTwoPi)
  double eval_reduced(double r) const;
  double deriv_reduced(double r) const;

  FourierSpectrum fourier_spectrum(int max_p) const;

  bool is_pwl() const { return std::holds_alternative<PiecewiseLinearPeriodic>(impl_); }
  const PiecewiseLinearPeriodic& as_pwl() const { return std::get<PiecewiseLinearPeriodic>(impl_); }
  const HarmonicFunction& as_harmonic() const { return std::get<HarmonicFunction>(impl_); }

 private:
  explicit PeriodicFunction(std::variant<PiecewiseLinearPeriodic, HarmonicFunction> impl)
      : impl_(std::move(impl)) {}
  std::variant<PiecewiseLinearPeriodic, HarmonicFunction> impl_;
};

// (1/2pi) int_0^{2pi} f g. Exact (closed forms) for every kind pairing.
double inner_product(const PeriodicFunction& f, const PeriodicFunction& g);
// (1/2pi) int_0^{2pi} f' g'. Exact.
double derivative_inner_product(const PeriodicFunction& f, const PeriodicFunction& g);
// Truncated autocorrelation (f * corr)(x) = sum_{|p| <= max_p} |f_hat(p)|^2 e^{ipx}.
double autocorrelation(const PeriodicFunction& f, double x, int max_p);

}  // namespace sigzero
