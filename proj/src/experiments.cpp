#include "sigzero/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "json.hpp"
#include "sigzero/errors.hpp"

namespace sigzero {

std::string format_g17(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_shortest(double v) {
  if (v == 0.0) v = 0.0;  // canonicalize -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string RunRecord::to_json() const {
  nlohmann::json j;
  j["experiment"] = experiment;
  j["kind"] = kind;
  j["n"] = n;
  j["law"] = law;
  j["replicate"] = replicate;
  j["report"] = nlohmann::json::parse(report.to_json());
  return j.dump();
}

RunRecord RunRecord::from_json(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  RunRecord r;
  r.experiment = j.at("experiment").get<std::string>();
  r.kind = j.at("kind").get<std::string>();
  r.n = j.at("n").get<long>();
  r.law = j.at("law").get<std::string>();
  r.replicate = j.at("replicate").get<long>();
  r.report = ZeroReport::from_json(j.at("report").dump());
  return r;
}

namespace {

// Stride-partitioned job loop: job j runs on thread j % T, results land in
// a preallocated slot, so the output bytes are independent of T.
void run_jobs(long total, int threads, const std::function<void(long)>& job) {
  if (threads <= 1 || total <= 1) {
    for (long i = 0; i < total; ++i) job(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  const int T = static_cast<int>(std::min<long>(threads, total));
  pool.reserve(static_cast<std::size_t>(T));
  for (int w = 0; w < T; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (long i = w; i < total; i += T) job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

void validate_common(const ExperimentConfig& cfg) {
  if (!(cfg.window_a < cfg.window_b)) throw ConfigError("window", "window must satisfy a < b");
  if (cfg.threads < 1) throw ConfigError("threads", "must be >= 1");
  if (cfg.spectrum_p < 1) throw ConfigError("spectrum_p", "must be >= 1");
}

}  // namespace

std::vector<RunRecord> run_universality(const ExperimentConfig& cfg, std::ostream* log) {
  validate_common(cfg);
  if (cfg.laws.empty()) throw ConfigError("laws", "at least one coefficient law is required");
  if (cfg.n_list.empty()) throw ConfigError("n", "at least one n is required");
  if (cfg.replicates < 1) throw ConfigError("replicates", "must be >= 1");
  if (!(cfg.oversample >= 1.0)) throw ConfigError("oversample", "must be >= 1");
  if (!(cfg.bisect_tol > 0.0)) throw ConfigError("bisect_tol", "must be > 0");
  for (long n : cfg.n_list)
    if (n < 1) throw ConfigError("n", "every n must be >= 1");

  const bool pwl = cfg.fn.is_pwl();
  const double band = pwl ? 0.0 : static_cast<double>(cfg.fn.as_harmonic().band());
  const long cells = static_cast<long>(cfg.laws.size()) * static_cast<long>(cfg.n_list.size());
  const long total = cells * cfg.replicates;
  std::vector<RunRecord> records(static_cast<std::size_t>(total));

  run_jobs(total, cfg.threads, [&](long jobi) {
    const long cell = jobi / cfg.replicates;
    const long rep = jobi % cfg.replicates;
    const std::size_t law_i = static_cast<std::size_t>(cell) / cfg.n_list.size();
    const std::size_t n_i = static_cast<std::size_t>(cell) % cfg.n_list.size();
    const long n = cfg.n_list[n_i];
    const long pn = cfg.freq.pn(n);
    auto stream = make_stream(cfg.seed, (static_cast<std::uint64_t>(cell) << 32) |
                                            static_cast<std::uint64_t>(rep));
    const auto t0 = std::chrono::steady_clock::now();
    auto coeffs = cfg.laws[law_i].sample_coefficients(n, stream);
    SignalInstance inst(cfg.fn, n, pn, std::move(coeffs));
    ZeroReport rep_out =
        pwl ? count_zeros_pwl(inst, cfg.window_a, cfg.window_b)
            : count_zeros_bracketed([&inst](double t) { return inst.eval(t); }, cfg.window_a,
                                    cfg.window_b, band, cfg.oversample, cfg.bisect_tol);
    const auto t1 = std::chrono::steady_clock::now();
    RunRecord& out = records[static_cast<std::size_t>(jobi)];
    out.experiment = "simulate";
    out.kind = "signal";
    out.n = n;
    out.law = cfg.laws[law_i].name();
    out.replicate = rep;
    out.report = std::move(rep_out);
    out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });

  for (long cell = 0; cell < cells; ++cell) {
    long degenerate = 0;
    double ms = 0.0;
    for (long rep = 0; rep < cfg.replicates; ++rep) {
      const auto& r = records[static_cast<std::size_t>(cell * cfg.replicates + rep)];
      degenerate += r.report.degenerate ? 1 : 0;
      ms += r.wall_ms;
    }
    const auto& first = records[static_cast<std::size_t>(cell * cfg.replicates)];
    if (degenerate > cfg.replicates / 20)
      throw NumericalError("cell law=" + first.law + " n=" + std::to_string(first.n) +
                           ": degenerate rate " + std::to_string(degenerate) + "/" +
                           std::to_string(cfg.replicates) + " exceeds 5%");
    if (log)
      *log << "[simulate] law=" << first.law << " n=" << first.n << " replicates=" << cfg.replicates
           << " degenerate=" << degenerate << " wall_ms=" << ms << "\n";
  }
  return records;
}

std::vector<RunRecord> run_limit_reference(const ExperimentConfig& cfg, std::ostream* log) {
  validate_common(cfg);
  if (cfg.limit_replicates < 1) throw ConfigError("limit_replicates", "must be >= 1");
  if (cfg.grid_points < 64) throw ConfigError("grid_points", "must be >= 64");

  const double span = cfg.window_b - cfg.window_a;
  int m = static_cast<int>(std::ceil(cfg.grid_points * span / kPi));
  if (m < 64) m = 64;
  CovarianceModel model(cfg.fn, cfg.spectrum_p);
  LimitZeroCounter counter(model, cfg.window_a, cfg.window_b, m);

  const long limit_cell =
      static_cast<long>(cfg.laws.size()) * static_cast<long>(cfg.n_list.size());
  const long total = cfg.limit_replicates;
  std::vector<RunRecord> records(static_cast<std::size_t>(total));

  run_jobs(total, cfg.threads, [&](long rep) {
    auto stream = make_stream(cfg.seed, (static_cast<std::uint64_t>(limit_cell) << 32) |
                                            static_cast<std::uint64_t>(rep));
    const auto t0 = std::chrono::steady_clock::now();
    ZeroReport zr = counter.count(stream);
    const auto t1 = std::chrono::steady_clock::now();
    RunRecord& out = records[static_cast<std::size_t>(rep)];
    out.experiment = "limit";
    out.kind = "limit";
    out.n = 0;
    out.law = "limit";
    out.replicate = rep;
    out.report = std::move(zr);
    out.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  });

  if (log)
    *log << "[limit] grid=" << m << " replicates=" << total
         << " refinements=" << counter.refinements_triggered() << "\n";
  return records;
}

CompareStats compare_distributions(const std::vector<long>& counts_a,
                                   const std::vector<long>& counts_b) {
  if (counts_a.empty() || counts_b.empty())
    throw ConfigError("records", "cannot compare an empty count sample");
  const auto moments = [](const std::vector<long>& c, double& mean, double& var) {
    NeumaierSum s;
    for (long v : c) s.add(static_cast<double>(v));
    mean = s.value() / static_cast<double>(c.size());
    NeumaierSum q;
    for (long v : c) {
      const double d = static_cast<double>(v) - mean;
      q.add(d * d);
    }
    var = c.size() > 1 ? q.value() / static_cast<double>(c.size() - 1) : 0.0;
  };
  CompareStats cs;
  moments(counts_a, cs.mean_a, cs.var_a);
  moments(counts_b, cs.mean_b, cs.var_b);

  std::map<long, double> pa, pb;
  for (long v : counts_a) pa[v] += 1.0 / static_cast<double>(counts_a.size());
  for (long v : counts_b) pb[v] += 1.0 / static_cast<double>(counts_b.size());
  std::vector<long> support;
  for (const auto& [v, p] : pa) support.push_back(v);
  for (const auto& [v, p] : pb) support.push_back(v);
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());

  double fa = 0.0, fb = 0.0;
  for (long v : support) {
    const auto ia = pa.find(v);
    const auto ib = pb.find(v);
    const double qa = ia == pa.end() ? 0.0 : ia->second;
    const double qb = ib == pb.end() ? 0.0 : ib->second;
    fa += qa;
    fb += qb;
    cs.ks = std::max(cs.ks, std::abs(fa - fb));
    cs.tv += 0.5 * std::abs(qa - qb);
  }
  return cs;
}

CovDiagnostic covariance_diagnostic(const PeriodicFunction& f, const FrequencySequence& freq,
                                    const std::vector<long>& n_list, double a, double b,
                                    int pairs_per_axis, int spectrum_p) {
  if (n_list.empty()) throw ConfigError("n", "at least one n is required");
  if (pairs_per_axis < 2) throw ConfigError("pairs", "must be >= 2");
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  const FourierSpectrum spec = f.fourier_spectrum(spectrum_p);

  std::vector<double> pts(static_cast<std::size_t>(pairs_per_axis));
  for (int i = 0; i < pairs_per_axis; ++i)
    pts[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / (pairs_per_axis - 1);

  CovDiagnostic diag;
  constexpr ErgodicKind kinds[] = {ErgodicKind::C, ErgodicKind::D, ErgodicKind::E};
  constexpr char kind_names[] = {'C', 'D', 'E'};
  double* slopes[] = {&diag.slope_c, &diag.slope_d, &diag.slope_e};
  for (int ki = 0; ki < 3; ++ki) {
    std::vector<double> lx, ly;
    for (long n : n_list) {
      const long pn = freq.pn(n);
      double sup = 0.0;
      for (double s : pts)
        for (double t : pts) {
          const double lim = ergodic_limit(kinds[ki], spec, spec, t - s);
          const double fin = ergodic_sum(kinds[ki], f, f, s, t, n, pn);
          sup = std::max(sup, std::abs(fin - lim));
        }
      diag.rows.push_back({kind_names[ki], n, sup});
      lx.push_back(std::log(static_cast<double>(n)));
      ly.push_back(std::log(std::max(sup, 1e-300)));
    }
    const std::size_t m = lx.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) mx += lx[i], my += ly[i];
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      num += (lx[i] - mx) * (ly[i] - my);
      den += (lx[i] - mx) * (lx[i] - mx);
    }
    *slopes[ki] = den > 0.0 ? num / den : 0.0;
  }
  return diag;
}

std::vector<double> spacing_histogram(const std::vector<RunRecord>& records, double a, double b,
                                      int bins) {
  if (bins < 1) throw ConfigError("bins", "must be >= 1");
  if (!(a < b)) throw ConfigError("window", "window must satisfy a < b");
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  const double width = (b - a) / bins;
  double total = 0.0;
  for (const auto& r : records)
    for (std::size_t i = 0; i + 1 < r.report.locations.size(); ++i) {
      const double gap = r.report.locations[i + 1] - r.report.locations[i];
      long idx = static_cast<long>(gap / width);
      if (idx < 0) idx = 0;
      if (idx >= bins) idx = bins - 1;
      hist[static_cast<std::size_t>(idx)] += 1.0;
      total += 1.0;
    }
  if (total > 0.0)
    for (auto& h : hist) h /= total;
  return hist;
}

std::vector<long> record_counts(const std::vector<RunRecord>& records, long n,
                                const std::string& law) {
  std::vector<long> counts;
  for (const auto& r : records)
    if (r.n == n && r.law == law) counts.push_back(r.report.count);
  return counts;
}

CellStats cell_stats(const std::vector<RunRecord>& records, long n, const std::string& law,
                     const std::vector<long>* limit_counts) {
  const auto counts = record_counts(records, n, law);
  if (counts.empty())
    throw ConfigError("records", "no records for cell law=" + law + " n=" + std::to_string(n));
  CellStats st;
  st.n = n;
  st.law = law;
  NeumaierSum s;
  for (long v : counts) s.add(static_cast<double>(v));
  st.mean = s.value() / static_cast<double>(counts.size());
  NeumaierSum q;
  for (long v : counts) {
    const double d = static_cast<double>(v) - st.mean;
    q.add(d * d);
  }
  st.var = counts.size() > 1 ? q.value() / static_cast<double>(counts.size() - 1) : 0.0;
  st.se = std::sqrt(st.var / static_cast<double>(counts.size()));
  if (limit_counts && !limit_counts->empty()) {
    const auto cs = compare_distributions(counts, *limit_counts);
    st.ks_vs_limit = cs.ks;
    st.tv_vs_limit = cs.tv;
  }
  return st;
}

void write_records_jsonl(const std::string& path, const std::vector<RunRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out", "cannot open '" + path + "' for writing");
  for (const auto& r : records) out << r.to_json() << "\n";
  if (!out) throw ConfigError("out", "write to '" + path + "' failed");
}

std::vector<RunRecord> read_records_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("records", "cannot open '" + path + "'");
  std::vector<RunRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(RunRecord::from_json(line));
  }
  return records;
}

void write_summary_csv(const std::string& path, const std::vector<CellStats>& cells) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("out", "cannot open '" + path + "' for writing");
  out << "cell_n,law,mean,var,se,ks_vs_limit,tv_vs_limit\n";
  for (const auto& c : cells)
    out << c.n << "," << c.law << "," << format_g17(c.mean) << "," << format_g17(c.var) << ","
        << format_g17(c.se) << "," << format_g17(c.ks_vs_limit) << ","
        << format_g17(c.tv_vs_limit) << "\n";
  if (!out) throw ConfigError("out", "write to '" + path + "' failed");
}

}  // namespace sigzero
