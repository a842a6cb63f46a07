#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace sigzero {

// Working period: the double nearest 2*pi. All angular reductions, knot
// grids and breakpoint algebra use this same constant so that the cell
// arithmetic stays self-consistent to the last bit.
inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Dekker splitting: exact product a*b = hi + lo without FMA.
inline std::pair<double, double> two_prod(double a, double b) {
  const double p = a * b;
  constexpr double split = 134217729.0;  // 2^27 + 1
  const double ca = split * a;
  const double a_hi = ca - (ca - a);
  const double a_lo = a - a_hi;
  const double cb = split * b;
  const double b_hi = cb - (cb - b);
  const double b_lo = b - b_hi;
  const double err = ((a_hi * b_hi - p) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
  return {p, err};
}

// x mod kTwoPi into [0, kTwoPi). Exact floor-based reduction, accurate to
// ~1 ulp of the result for |x| <= 2^27 * kTwoPi; beyond that falls back to
// fmod quality.
inline double reduce_two_pi(double x) {
  if (!(x >= -8.4e8 && x <= 8.4e8)) {
    double r = std::fmod(x, kTwoPi);
    if (r < 0.0) r += kTwoPi;
    if (r >= kTwoPi) r -= kTwoPi;
    return r;
  }
  const double k = std::floor(x * (1.0 / kTwoPi));
  const auto [p, e] = two_prod(k, kTwoPi);
  double r = (x - p) - e;
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

// (num/den) mod kTwoPi for exact integers num >= 0, den >= 1 (num <= 2^53).
// Used for signal phases k*p_n/n where num can reach ~2e9; plain
// double(num)/den would already have lost ~1e-11 before reduction.
inline double phase_mod_two_pi(std::int64_t num, std::int64_t den) {
  const double x = static_cast<double>(num);
  const double dn = static_cast<double>(den);
  const auto [d_hi, d_lo] = two_prod(dn, kTwoPi);  // den*kTwoPi exactly
  double q = std::floor(x / d_hi);
  const auto [p, e] = two_prod(q, d_hi);
  double r = ((x - p) - e) - q * d_lo;
  while (r < 0.0) r += d_hi, r += d_lo;
  while (r >= d_hi + d_lo) r -= d_hi, r -= d_lo;
  double out = r / dn;
  if (out >= kTwoPi) out = 0.0;
  return out;
}

// Neumaier-compensated accumulator.
struct NeumaierSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

}  // namespace sigzero
