#pragma once

#include <Eigen/Dense>
#include <atomic>
#include <memory>
#include <vector>

#include "sigzero/kernels.hpp"
#include "sigzero/rng.hpp"
#include "sigzero/zeros.hpp"

namespace sigzero {

struct GridSample {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> derivs;
  int jitter_level = 0;  // 0: none, 1..3: 1e-12 / 1e-10 / 1e-8 added to the diagonal
};

// Gaussian sampler on a fixed time grid via one Cholesky factorization of
// cov_matrix. Failed factorizations retry with diagonal jitter
// 1e-12 -> 1e-10 -> 1e-8, then throw NumericalError.
class GridSampler {
 public:
  GridSampler(const CovarianceModel& model, std::vector<double> times);
  GridSample draw(std::mt19937_64& stream) const;
  int jitter_level() const { return jitter_level_; }
  const Eigen::MatrixXd& chol_factor() const { return chol_; }

 private:
  std::vector<double> times_;
  Eigen::MatrixXd chol_;  // lower-triangular L with L L^T = cov (+ jitter)
  int jitter_level_ = 0;
};

GridSample sample_limit_grid(const CovarianceModel& model, const std::vector<double>& times,
                             std::mt19937_64& stream);

// Randomized spectral representation with exact covariance for every M:
//   t -> |f_hat(0)| xi_0 + sum_{p=1}^P sum_{m=1}^M sqrt(2/M) |f_hat(p)|
//          (xi_pm cos(p U_pm t) + eta_pm sin(p U_pm t)),   U_pm ~ U[0,1].
// Atoms with zero spectral energy are skipped.
struct SpectralPath {
  double dc = 0.0;  // |f_hat(0)| * xi_0
  std::vector<double> omega, amp_cos, amp_sin;

  double eval(double t) const;
  double eval_derivative(double t) const;
};

SpectralPath sample_limit_spectral(const CovarianceModel& model, int M, std::mt19937_64& stream);

// Zero counter for the limit process: uniform grid of `grid_points` >= 64,
// sign changes on sampled values, plus a Hermite dip pass. Cells whose
// endpoint values share a sign while the derivative pattern admits a hidden
// zero pair get one midpoint resample conditional on the cell's endpoint
// (value, derivative) data, then the two half-cells are recounted (one
// refinement level).
class LimitZeroCounter {
 public:
  LimitZeroCounter(const CovarianceModel& model, double a, double b, int grid_points);
  ZeroReport count(std::mt19937_64& stream) const;
  long refinements_triggered() const { return refinements_.load(); }

 private:
  double a_, b_, h_;
  int grid_points_;
  std::unique_ptr<GridSampler> sampler_;
  // stationary refinement blocks: midpoint | cell endpoints
  Eigen::Matrix<double, 2, 4> cond_w_;     // Sigma_mc Sigma_cc^{-1}
  Eigen::Matrix2d cond_chol_;              // chol(Sigma_mm - W Sigma_cm)
  double flag_threshold_ = 0.0;
  mutable std::atomic<long> refinements_{0};
};

ZeroReport count_zeros_limit(const CovarianceModel& model, double a, double b, int grid_points,
                             std::mt19937_64& stream);

}  // namespace sigzero
