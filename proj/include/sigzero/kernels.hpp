#pragma once

#include <complex>
#include <vector>

#include "sigzero/periodic_function.hpp"

namespace sigzero {

// K(x) = int_0^1 e^{iux} du and derivatives:
//   K^(j)(x) = i^j int_0^1 u^j e^{iux} du,  j = 0, 1, 2.
// K(0) = 1, K'(0) = i/2, K''(0) = -1/3.
std::complex<double> k_eval(int order, double x);

enum class KnMethod { direct, closed };

// Riemann kernel K_n(x) = (1/n) sum_{k=1}^n e^{ikx/n} and derivatives
//   K_n'(x) = (i/n) sum (k/n) e^{ikx/n},  K_n''(x) = -(1/n) sum (k/n)^2 e^{ikx/n}.
// `closed` uses geometric-sum closed forms; it falls back to `direct` when
// |sin(x/2n)| < 1e-12 (removable singularities at x in 2*pi*n*Z) and for
// |x| < 0.01 where the closed-form brackets cancel catastrophically.
std::complex<double> kn_eval(int order, long n, double x, KnMethod method);

enum class ErgodicKind { C, D, E };

// Ergodic averages along the orbit k*(p_n + t)/n mod 2pi:
//   C: (1/n) sum g(k(p_n+t)/n) h(k(p_n+s)/n)
//   D: (1/n) sum (k/n)^2 g'(k(p_n+t)/n) h'(k(p_n+s)/n)
//   E: (1/n) sum (k/n)   g(k(p_n+t)/n) h'(k(p_n+s)/n)
double ergodic_sum(ErgodicKind kind, const PeriodicFunction& g, const PeriodicFunction& h,
                   double s, double t, long n, long pn);

// n -> infinity limits of the sums above, u = t - s:
//   C:  sum_p g_hat(p) h_hat(-p) K(pu)
//   D: -sum_p g_hat(p) h_hat(-p) p^2 K''(pu)
//   E: -sum_p g_hat(p) h_hat(-p) p K'(pu)
// Summation runs over |p| <= min(g.max_p, h.max_p); the imaginary residual
// must stay below 1e-10 (conjugate symmetry), else NumericalError.
double ergodic_limit(ErgodicKind kind, const FourierSpectrum& g, const FourierSpectrum& h,
                     double u);

// Covariance structure of the limit process for one periodic function:
//   rho(u)  = sum_p |f_hat(p)|^2 K(pu)   (real by symmetry)
//   rho'(u) = sum_p |f_hat(p)|^2 p K'(pu)
//   rho''(u)= sum_p |f_hat(p)|^2 p^2 K''(pu)
// rho(order, u) evaluates the truncated series at every u (u = 0 included),
// so series identities stay truncation-consistent. cov_matrix pins its
// single-time diagonal blocks to the exact moments diag(<f,f>, <f',f'>/3);
// the spectral tail is positive, so pinning preserves positive
// semi-definiteness.
class CovarianceModel {
 public:
  CovarianceModel(PeriodicFunction f, int max_p);

  double rho(int order, double u) const;
  // rho''(t) - rho''(0) via the quadrature route
  //   (1/t^3) int_0^t s^2 [A(0) - A(s)] ds,  A(s) = sum_p p^2 |f_hat(p)|^2 cos(ps),
  // with adaptive Simpson at abs tol 1e-10. Positive for t != 0.
  double rho2_gap(double t) const;

  double f_energy() const { return f_energy_; }            // <f, f> exact
  double fprime_energy() const { return fprime_energy_; }  // <f', f'> exact

  // Joint covariance of (X(t_1..t_m), X'(t_1..t_m)), block layout
  // [values | derivatives], size 2m x 2m. Times must be distinct.
  std::vector<std::vector<double>> cov_matrix(const std::vector<double>& times) const;

  const FourierSpectrum& spectrum() const { return spec_; }
  const PeriodicFunction& function() const { return f_; }

 private:
  PeriodicFunction f_;
  FourierSpectrum spec_;
  double f_energy_;
  double fprime_energy_;
};

}  // namespace sigzero
