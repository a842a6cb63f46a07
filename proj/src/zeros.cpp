#include "sigzero/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "json.hpp"
#include "sigzero/errors.hpp"
#include "sigzero/num.hpp"

namespace sigzero {

namespace {

constexpr double kMergeTol = 1e-12;   // zero/breakpoint dedup radius
constexpr double kNearZero = 1e-13;   // bracketed sampling: |y| below this is a zero

struct Event {
  double t;
  double dslope;  // jump of d/dt X_n when the sweep crosses this knot event
};

// All t in (a, b) where term k's argument crosses knot j, tagged with the
// induced slope jump (1/sqrt n) a_k (k/n) (m_j - m_{j-1}).
std::vector<Event> build_events(const SignalInstance& inst, double a, double b) {
  const auto& f = inst.f.as_pwl();
  const double dn = static_cast<double>(inst.n);
  std::vector<Event> ev;
  for (long k = 1; k <= inst.n; ++k) {
    const double kn = static_cast<double>(k) / dn;
    const double ph = inst.phase0[static_cast<std::size_t>(k - 1)];
    const double amp = inst.inv_sqrt_n * inst.coeffs[static_cast<std::size_t>(k - 1)] * kn;
    for (int j = 0; j < f.num_cells(); ++j) {
      const double sj = f.knots[static_cast<std::size_t>(j)];
      const double dm = f.slope_jump(j);
      const double lo = (kn * a + ph - sj) / kTwoPi;
      const double hi = (kn * b + ph - sj) / kTwoPi;
      const long q0 = static_cast<long>(std::ceil(lo - 1e-9));
      const long q1 = static_cast<long>(std::floor(hi + 1e-9));
      for (long q = q0; q <= q1; ++q) {
        const double t = ((sj - ph) + static_cast<double>(q) * kTwoPi) / kn;
        if (t > a && t < b) ev.push_back({t, amp * dm});
      }
    }
  }
  std::sort(ev.begin(), ev.end(), [](const Event& x, const Event& y) { return x.t < y.t; });
  return ev;
}

void sort_dedup(std::vector<double>& xs) {
  std::sort(xs.begin(), xs.end());
  std::vector<double> out;
  for (double x : xs)
    if (out.empty() || x - out.back() > kMergeTol) out.push_back(x);
  xs = std::move(out);
}

// Zero scan over one affine cell [t0, t1] with endpoint values y0, y1.
// Records t0 when y0 == 0 and the interior crossing when the sign flips;
// the final endpoint is handled by the caller. Exact double-zero cells are
// identically-zero plateaus.
struct CellScanner {
  std::vector<double> zeros;
  bool degenerate = false;
  void scan(double t0, double y0, double t1, double y1) {
    if (y0 == 0.0) {
      zeros.push_back(t0);
      if (y1 == 0.0 && t1 > t0) degenerate = true;
      return;
    }
    if (y1 == 0.0) return;  // recorded as the next cell's start
    if ((y0 < 0.0) != (y1 < 0.0)) zeros.push_back(t0 + y0 / (y0 - y1) * (t1 - t0));
  }
};

}  // namespace

std::vector<double> breakpoints(const SignalInstance& inst, double a, double b) {
  if (!inst.f.is_pwl()) throw ConfigError("function", "breakpoints need a piecewise-linear kind");
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  std::vector<double> ts;
  const auto ev = build_events(inst, a, b);
  ts.reserve(ev.size() + 2);
  ts.push_back(a);
  for (const auto& e : ev) ts.push_back(e.t);
  ts.push_back(b);
  sort_dedup(ts);
  if (ts.back() != b) ts.push_back(b);  // keep the exact endpoint after merging
  return ts;
}

ZeroReport count_zeros_pwl(const SignalInstance& inst, double a, double b) {
  if (!inst.f.is_pwl()) throw ConfigError("function", "exact counting needs a piecewise-linear kind");
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  const auto ev = build_events(inst, a, b);
  ZeroReport rep;
  CellScanner scan;

  const double direct_cost =
      static_cast<double>(inst.n) * (static_cast<double>(ev.size()) + 2.0);
  if (direct_cost <= 2e6) {
    rep.method = "pwl-direct";
    std::vector<double> ts;
    ts.reserve(ev.size() + 2);
    ts.push_back(a);
    for (const auto& e : ev) ts.push_back(e.t);
    ts.push_back(b);
    sort_dedup(ts);
    if (ts.back() != b) ts.push_back(b);
    std::vector<double> ys(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) ys[i] = inst.eval(ts[i]);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) scan.scan(ts[i], ys[i], ts[i + 1], ys[i + 1]);
    if (ys.back() == 0.0) scan.zeros.push_back(ts.back());
  } else {
    rep.method = "pwl-sweep";
    // value/slope propagation along the event list, re-anchored by direct
    // evaluation every kAnchorEvery events to cap accumulated drift
    constexpr long kAnchorEvery = 4096;
    double t_cur = a;
    double y = inst.eval(a);
    double slope = inst.eval_derivative(a);
    long processed = 0;
    long next_anchor = kAnchorEvery;
    std::size_t i = 0;
    while (i < ev.size()) {
      const double u = ev[i].t;
      if (processed >= next_anchor && u - t_cur > 1e-9) {
        const double mid = 0.5 * (t_cur + u);
        slope = inst.eval_derivative(mid);
        y = inst.eval(mid) + slope * (t_cur - mid);
        next_anchor = processed + kAnchorEvery;
      }
      const double y1 = y + slope * (u - t_cur);
      scan.scan(t_cur, y, u, y1);
      while (i < ev.size() && ev[i].t == u) {
        slope += ev[i].dslope;
        ++i;
        ++processed;
      }
      t_cur = u;
      y = y1;
    }
    const double yb = y + slope * (b - t_cur);
    scan.scan(t_cur, y, b, yb);
    if (yb == 0.0) scan.zeros.push_back(b);
  }

  sort_dedup(scan.zeros);
  rep.locations = std::move(scan.zeros);
  rep.count = static_cast<long>(rep.locations.size());
  rep.degenerate = scan.degenerate;
  return rep;
}

ZeroReport count_zeros_bracketed(const std::function<double(double)>& path, double a, double b,
                                 double max_freq, double oversample, double tol) {
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  if (!(max_freq > 0.0)) throw ConfigError("max_freq", "must be > 0");
  if (!(oversample >= 1.0)) throw ConfigError("oversample", "must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("bisect_tol", "must be > 0");

  const double h_target = (kTwoPi / max_freq) / oversample;
  long steps = static_cast<long>(std::ceil((b - a) / h_target));
  if (steps < 8) steps = 8;

  ZeroReport rep;
  rep.method = "bracketed";
  std::vector<double> zeros;
  double t_prev = a;
  double y_prev = path(a);
  if (y_prev == 0.0) rep.degenerate = true;
  if (std::abs(y_prev) <= kNearZero) zeros.push_back(a);

  for (long s = 1; s <= steps; ++s) {
    const double t = s == steps ? b : a + (b - a) * (static_cast<double>(s) / steps);
    const double y = path(t);
    if (y == 0.0) rep.degenerate = true;
    if (std::abs(y) <= kNearZero) {
      zeros.push_back(t);
    } else if (std::abs(y_prev) > kNearZero && (y_prev < 0.0) != (y < 0.0)) {
      double tl = t_prev, tr = t;
      double yl = y_prev;
      while (tr - tl > tol) {
        const double tm = 0.5 * (tl + tr);
        const double ym = path(tm);
        if (ym == 0.0) {
          tl = tr = tm;
          break;
        }
        if ((ym < 0.0) == (yl < 0.0)) {
          tl = tm;
          yl = ym;
        } else {
          tr = tm;
        }
      }
      zeros.push_back(0.5 * (tl + tr));
    }
    t_prev = t;
    y_prev = y;
  }

  sort_dedup(zeros);
  rep.locations = std::move(zeros);
  rep.count = static_cast<long>(rep.locations.size());
  return rep;
}

double kac_rice_expected(const PeriodicFunction& f, double a, double b) {
  if (!(a <= b)) throw ConfigError("window", "window must satisfy a <= b");
  const double e0 = inner_product(f, f);
  const double e1 = derivative_inner_product(f, f);
  if (!(e0 > 0.0)) throw ConfigError("function", "function must have positive energy");
  return (b - a) / kPi * std::sqrt(e1 / (3.0 * e0));
}

std::string ZeroReport::to_json() const {
  nlohmann::json j;
  j["count"] = count;
  j["degenerate"] = degenerate;
  j["method"] = method;
  j["locations"] = locations;
  return j.dump();
}

ZeroReport ZeroReport::from_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  ZeroReport rep;
  rep.count = j.at("count").get<long>();
  rep.degenerate = j.at("degenerate").get<bool>();
  rep.method = j.at("method").get<std::string>();
  rep.locations = j.at("locations").get<std::vector<double>>();
  return rep;
}

}  // namespace sigzero
