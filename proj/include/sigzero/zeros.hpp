#pragma once

#include <functional>
#include <string>
#include <vector>

#include "sigzero/signals.hpp"

namespace sigzero {

struct ZeroReport {
  long count = 0;
  std::vector<double> locations;  // sorted, deduplicated at 1e-12
  bool degenerate = false;
  std::string method;

  std::string to_json() const;
  static ZeroReport from_json(const std::string& line);
};

// All t in [a, b] where some term's argument k(p_n+t)/n crosses a knot of f,
// i.e. t = (s_j + 2pi q - phase0_k) * n / k. Sorted, merged at 1e-12,
// endpoints a and b included. Requires piecewise-linear f.
std::vector<double> breakpoints(const SignalInstance& inst, double a, double b);

// Exact zero count for piecewise-linear f: X_n is affine between
// breakpoints, so roots are linear interpolations of cell-endpoint values.
// Endpoint zeros count once; a cell with exactly-zero values at both ends is
// an identically-zero plateau and sets degenerate = true (its interior is
// not counted).
ZeroReport count_zeros_pwl(const SignalInstance& inst, double a, double b);

// Sign-change bracketing + bisection for smooth paths. Samples at spacing
// (2pi/max_freq)/oversample; near-zero samples (|y| <= 1e-13) are recorded
// as zeros directly and excluded from bracketing; degenerate flags any
// exactly-zero sample. Bisection refines each bracket to width <= tol.
ZeroReport count_zeros_bracketed(const std::function<double(double)>& path, double a, double b,
                                 double max_freq, double oversample, double tol);

// Expected zero count of the limit process on [a, b]:
//   ((b - a)/pi) * sqrt((<f',f'>/3) / <f,f>).
double kac_rice_expected(const PeriodicFunction& f, double a, double b);

}  // namespace sigzero
