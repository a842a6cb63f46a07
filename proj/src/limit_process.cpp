#include "sigzero/limit_process.hpp"

#include <cmath>

#include "sigzero/errors.hpp"
#include "sigzero/num.hpp"

namespace sigzero {

namespace {

// Cholesky with the shared jitter ladder. Returns the lower factor and sets
// `level` to the ladder step that succeeded (0 = no jitter).
Eigen::MatrixXd chol_with_jitter(Eigen::MatrixXd cov, int& level) {
  static constexpr double kJitter[] = {0.0, 1e-12, 1e-10, 1e-8};
  const Eigen::Index n = cov.rows();
  for (int lv = 0; lv < 4; ++lv) {
    Eigen::MatrixXd work = cov;
    if (kJitter[lv] > 0.0) work.diagonal().array() += kJitter[lv];
    Eigen::LLT<Eigen::MatrixXd> llt(work);
    if (llt.info() == Eigen::Success) {
      level = lv;
      return llt.matrixL();
    }
  }
  throw NumericalError("covariance factorization failed for a " + std::to_string(n) + "x" +
                       std::to_string(n) + " matrix even with 1e-8 diagonal jitter");
}

}  // namespace

GridSampler::GridSampler(const CovarianceModel& model, std::vector<double> times)
    : times_(std::move(times)) {
  const auto cov = model.cov_matrix(times_);
  const Eigen::Index dim = static_cast<Eigen::Index>(cov.size());
  Eigen::MatrixXd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = cov[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  chol_ = chol_with_jitter(std::move(m), jitter_level_);
}

GridSample GridSampler::draw(std::mt19937_64& stream) const {
  const std::size_t m = times_.size();
  Eigen::VectorXd z(static_cast<Eigen::Index>(2 * m));
  GaussianDraw gauss;
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = gauss(stream);
  const Eigen::VectorXd x = chol_.triangularView<Eigen::Lower>() * z;
  GridSample gs;
  gs.times = times_;
  gs.values.assign(x.data(), x.data() + m);
  gs.derivs.assign(x.data() + m, x.data() + 2 * m);
  gs.jitter_level = jitter_level_;
  return gs;
}

GridSample sample_limit_grid(const CovarianceModel& model, const std::vector<double>& times,
                             std::mt19937_64& stream) {
  return GridSampler(model, times).draw(stream);
}

double SpectralPath::eval(double t) const {
  NeumaierSum acc;
  acc.add(dc);
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double a = omega[i] * t;
    acc.add(amp_cos[i] * std::cos(a) + amp_sin[i] * std::sin(a));
  }
  return acc.value();
}

double SpectralPath::eval_derivative(double t) const {
  NeumaierSum acc;
  for (std::size_t i = 0; i < omega.size(); ++i) {
    const double a = omega[i] * t;
    acc.add(omega[i] * (amp_sin[i] * std::cos(a) - amp_cos[i] * std::sin(a)));
  }
  return acc.value();
}

SpectralPath sample_limit_spectral(const CovarianceModel& model, int M, std::mt19937_64& stream) {
  if (M < 1) throw ConfigError("M", "spectral atom count must be >= 1");
  const FourierSpectrum& spec = model.spectrum();
  SpectralPath path;
  GaussianDraw gauss;
  const double a0 = std::abs(spec.coeffs[0]);
  if (a0 > 0.0) path.dc = a0 * gauss(stream);
  const double amp_scale = std::sqrt(2.0 / static_cast<double>(M));
  for (int p = 1; p <= spec.max_p; ++p) {
    const double ap = std::abs(spec.coeffs[static_cast<std::size_t>(p)]);
    if (ap == 0.0) continue;
    for (int m = 0; m < M; ++m) {
      const double u = uniform01(stream);
      const double xi = gauss(stream);
      const double eta = gauss(stream);
      path.omega.push_back(static_cast<double>(p) * u);
      path.amp_cos.push_back(amp_scale * ap * xi);
      path.amp_sin.push_back(amp_scale * ap * eta);
    }
  }
  return path;
}

LimitZeroCounter::LimitZeroCounter(const CovarianceModel& model, double a, double b,
                                   int grid_points)
    : a_(a), b_(b), grid_points_(grid_points) {
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  if (grid_points < 64) throw ConfigError("grid_points", "must be >= 64");
  const int m = grid_points;
  h_ = (b - a) / static_cast<double>(m - 1);
  std::vector<double> times(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) times[static_cast<std::size_t>(i)] = a + h_ * i;
  times.back() = b;
  sampler_ = std::make_unique<GridSampler>(model, std::move(times));

  // stationary conditional blocks for one midpoint resample per flagged cell:
  // conditioning order (X_l, X_r, X'_l, X'_r), target (X_m, X'_m)
  const double e0 = model.f_energy();
  const double e1 = model.fprime_energy() / 3.0;
  const double r0h = model.rho(0, h_), r1h = model.rho(1, h_), r2h = model.rho(2, h_);
  const double hh = 0.5 * h_;
  const double r0m = model.rho(0, hh), r1m = model.rho(1, hh), r2m = model.rho(2, hh);

  Eigen::Matrix4d cc;
  cc << e0, r0h, 0.0, r1h,      //
      r0h, e0, -r1h, 0.0,       //
      0.0, -r1h, e1, -r2h,      //
      r1h, 0.0, -r2h, e1;
  Eigen::Matrix<double, 2, 4> mc;
  mc << r0m, r0m, -r1m, r1m,    //
      r1m, -r1m, -r2m, -r2m;
  cond_w_ = cc.ldlt().solve(mc.transpose()).transpose();
  Eigen::Matrix2d cond = Eigen::Matrix2d::Identity();
  cond(0, 0) = e0;
  cond(1, 1) = e1;
  cond(0, 1) = cond(1, 0) = 0.0;
  cond -= cond_w_ * mc.transpose();
  cond = 0.5 * (cond + cond.transpose().eval());
  Eigen::LLT<Eigen::Matrix2d> llt(cond);
  if (llt.info() != Eigen::Success) {
    cond.diagonal().array() += 1e-12;
    llt.compute(cond);
    if (llt.info() != Eigen::Success)
      throw NumericalError("refinement conditional covariance is not positive definite");
  }
  cond_chol_ = llt.matrixL();
  flag_threshold_ = 0.1 * std::sqrt(e0);
}

ZeroReport LimitZeroCounter::count(std::mt19937_64& stream) const {
  const GridSample gs = sampler_->draw(stream);
  const std::size_t m = gs.times.size();
  ZeroReport rep;
  rep.method = "limit-grid";
  std::vector<double> zeros;
  GaussianDraw gauss;

  const auto record_crossing = [&zeros](double t0, double y0, double t1, double y1) {
    zeros.push_back(t0 + y0 / (y0 - y1) * (t1 - t0));
  };

  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double t0 = gs.times[i], t1 = gs.times[i + 1];
    const double y0 = gs.values[i], y1 = gs.values[i + 1];
    if ((y0 < 0.0) != (y1 < 0.0)) {
      record_crossing(t0, y0, t1, y1);
      continue;
    }
    // same-sign cell: Hermite cubic dip test. A signed minimum within
    // flag_threshold_ of zero earns one conditional midpoint resample.
    const double d0 = gs.derivs[i], d1 = gs.derivs[i + 1];
    const double sgn = y0 < 0.0 ? -1.0 : 1.0;
    const double c2 = 3.0 * (y1 - y0) / (h_ * h_) - (2.0 * d0 + d1) / h_;
    const double c3 = 2.0 * (y0 - y1) / (h_ * h_ * h_) + (d0 + d1) / (h_ * h_);
    double dip = std::min(sgn * y0, sgn * y1);  // running signed minimum
    // critical points of y0 + d0 s + c2 s^2 + c3 s^3 inside (0, h)
    const double qa = 3.0 * c3, qb = 2.0 * c2, qc = d0;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      for (const double root : {qa == 0.0 ? (qb == 0.0 ? -1.0 : -qc / qb) : (-qb - sq) / (2.0 * qa),
                                qa == 0.0 ? -1.0 : (-qb + sq) / (2.0 * qa)}) {
        if (root > 0.0 && root < h_) {
          const double v = y0 + root * (d0 + root * (c2 + root * c3));
          dip = std::min(dip, sgn * v);
        }
      }
    }
    if (dip > flag_threshold_) continue;
    ++refinements_;
    Eigen::Vector4d cvars(y0, y1, d0, d1);
    Eigen::Vector2d zr(gauss(stream), gauss(stream));
    const Eigen::Vector2d mid =
        cond_w_ * cvars + cond_chol_.triangularView<Eigen::Lower>() * zr;
    const double tm = 0.5 * (t0 + t1);
    const double ym = mid[0];
    if ((y0 < 0.0) != (ym < 0.0)) record_crossing(t0, y0, tm, ym);
    if ((ym < 0.0) != (y1 < 0.0)) record_crossing(tm, ym, t1, y1);
  }

  std::sort(zeros.begin(), zeros.end());
  rep.locations = std::move(zeros);
  rep.count = static_cast<long>(rep.locations.size());
  return rep;
}

ZeroReport count_zeros_limit(const CovarianceModel& model, double a, double b, int grid_points,
                             std::mt19937_64& stream) {
  return LimitZeroCounter(model, a, b, grid_points).count(stream);
}

}  // namespace sigzero
