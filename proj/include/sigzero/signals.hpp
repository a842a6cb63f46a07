#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sigzero/periodic_function.hpp"
#include "sigzero/rng.hpp"

namespace sigzero {

enum class LawKind { gaussian, rademacher, uniform_centered, discrete_custom };

// Centered unit-variance coefficient laws.
struct CoefficientLaw {
  LawKind kind = LawKind::gaussian;
  std::vector<double> values;  // discrete_custom only
  std::vector<double> probs;

  static CoefficientLaw gaussian();
  static CoefficientLaw rademacher();
  static CoefficientLaw uniform_centered();
  // Validates sum(p) = 1, mean 0, variance 1 (tolerance 1e-12).
  static CoefficientLaw discrete(std::vector<double> values, std::vector<double> probs);

  double fourth_moment() const;
  std::string name() const;
  std::vector<double> sample_coefficients(long n, std::mt19937_64& stream) const;
};

// Frequency shifts p_n with p_n/n -> alpha. Presets keep alpha/pi badly
// approximable so the Diophantine condition holds.
struct FrequencySequence {
  double alpha = 0.0;
  std::vector<long> explicit_pn;  // when non-empty, overrides the floor rule

  static FrequencySequence golden();  // alpha = pi*(sqrt(5)-1)/2
  static FrequencySequence with_alpha(double alpha);
  static FrequencySequence explicit_list(std::vector<long> pn);

  long pn(long n) const;  // floor(n*alpha) unless explicit
};

// One realization X_n(t) = (1/sqrt n) sum_k a_k f(k (p_n + t)/n) with
//   X_n'(t) = (1/sqrt n) sum_k a_k (k/n) f'(k (p_n + t)/n).
// Phases k*p_n/n are reduced mod 2pi with exact integer products so that
// evaluations stay accurate for k*p_n up to ~2^53.
struct SignalInstance {
  long n = 0;
  long pn = 0;
  std::vector<double> coeffs;
  PeriodicFunction f;
  std::vector<double> phase0;  // (k p_n / n) mod 2pi, k = 1..n
  double inv_sqrt_n = 0.0;

  SignalInstance(PeriodicFunction f, long n, long pn, std::vector<double> coeffs);

  double eval(double t) const;
  double eval_derivative(double t) const;  // right-hand value at pwl breakpoints
};

}  // namespace sigzero
