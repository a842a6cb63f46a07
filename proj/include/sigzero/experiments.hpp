#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sigzero/limit_process.hpp"
#include "sigzero/signals.hpp"
#include "sigzero/zeros.hpp"

namespace sigzero {

struct ExperimentConfig {
  PeriodicFunction fn = PeriodicFunction::cosine();
  std::string fn_spec = "kind=cos";
  std::vector<CoefficientLaw> laws;
  FrequencySequence freq = FrequencySequence::golden();
  std::string alpha_spec = "golden";
  double window_a = 0.0;
  double window_b = kPi;
  std::vector<long> n_list;
  long replicates = 0;
  long limit_replicates = 0;
  int grid_points = 512;    // limit-process grid per pi of window length
  double oversample = 8.0;  // bracketed counting
  double bisect_tol = 1e-12;
  int spectrum_p = 512;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct RunRecord {
  std::string experiment;
  std::string kind;  // "signal" | "limit"
  long n = 0;        // 0 for limit records
  std::string law;   // "limit" for limit records
  long replicate = 0;
  ZeroReport report;
  double wall_ms = 0.0;  // in-memory only, not persisted (records must be
                         // byte-identical across thread counts)

  std::string to_json() const;
  static RunRecord from_json(const std::string& line);
};

struct CellStats {
  long n = 0;
  std::string law;
  double mean = 0.0, var = 0.0, se = 0.0;
  double ks_vs_limit = std::numeric_limits<double>::quiet_NaN();
  double tv_vs_limit = std::numeric_limits<double>::quiet_NaN();
};

struct CompareStats {
  double ks = 0.0, tv = 0.0;
  double mean_a = 0.0, mean_b = 0.0, var_a = 0.0, var_b = 0.0;
};

// One cell per (n, law); replicate streams keyed by (cell index, replicate).
// Records come back in deterministic (cell, replicate) order regardless of
// the thread count. A degenerate rate > 5% in any cell raises
// NumericalError with a diagnostic.
std::vector<RunRecord> run_universality(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// Limit-process reference cell (kind = "limit"); grid resolution scales as
// grid_points per pi of window length. Stream ids continue after the signal
// cells so a combined run stays reproducible.
std::vector<RunRecord> run_limit_reference(const ExperimentConfig& cfg, std::ostream* log = nullptr);

// KS distance between right-continuous CDFs of two integer count samples,
// and total variation between their PMFs.
CompareStats compare_distributions(const std::vector<long>& counts_a,
                                   const std::vector<long>& counts_b);

struct DiagRow {
  char kind = 'C';  // 'C', 'D', 'E'
  long n = 0;
  double sup_error = 0.0;
};
struct CovDiagnostic {
  std::vector<DiagRow> rows;
  double slope_c = 0.0, slope_d = 0.0, slope_e = 0.0;  // log-log lsq slopes
};

// Deterministic expectation-identity check: sup over a (pairs x pairs) grid
// of (s, t) in [a, b]^2 of |ergodic_sum - ergodic_limit| per kind and n.
CovDiagnostic covariance_diagnostic(const PeriodicFunction& f, const FrequencySequence& freq,
                                    const std::vector<long>& n_list, double a, double b,
                                    int pairs_per_axis = 10, int spectrum_p = 512);

// Pooled gaps between consecutive zeros, fixed bin width (b-a)/bins over
// [0, b-a]; returns probability masses (sum 1 unless there are no gaps).
std::vector<double> spacing_histogram(const std::vector<RunRecord>& records, double a, double b,
                                      int bins = 50);

std::vector<long> record_counts(const std::vector<RunRecord>& records, long n,
                                const std::string& law);
CellStats cell_stats(const std::vector<RunRecord>& records, long n, const std::string& law,
                     const std::vector<long>* limit_counts);

void write_records_jsonl(const std::string& path, const std::vector<RunRecord>& records);
std::vector<RunRecord> read_records_jsonl(const std::string& path);
void write_summary_csv(const std::string& path, const std::vector<CellStats>& cells);

// %.17g float formatting used by the CSV writer.
std::string format_g17(double v);
// Shortest round-trip decimal form (std::to_chars).
std::string format_shortest(double v);

}  // namespace sigzero
