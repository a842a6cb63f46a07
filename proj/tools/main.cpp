#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sigzero/config.hpp"
#include "sigzero/errors.hpp"
#include "sigzero/experiments.hpp"
#include "sigzero/kernels.hpp"
#include "sigzero/zeros.hpp"

namespace {

using namespace sigzero;

ExperimentConfig load_with_overrides(const std::string& path,
                                     const std::vector<std::string>& sets) {
  std::map<std::string, std::map<std::string, std::string>> raw;
  if (!path.empty()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    raw = raw_from_text(buf.str());
  }
  for (const auto& s : sets) apply_override(raw, s);
  return config_from_raw(raw);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zero-count statistics of randomized periodic sums and their Gaussian limit"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ---------------------------------------------------------------- simulate
  auto* sim = app.add_subcommand(
      "simulate", "signal zero-count cells; adds the limit reference when limit_replicates > 0");
  std::string sim_config, sim_out, sim_summary;
  std::vector<std::string> sim_sets;
  std::uint64_t sim_seed = 0;
  int sim_threads = 1;
  bool sim_dump = false;
  sim->add_option("--config", sim_config, "config file")->required();
  sim->add_option("--seed", sim_seed, "master seed (required to run)");
  sim->add_option("--out", sim_out, "records JSONL output path (required to run)");
  sim->add_option("--summary", sim_summary, "summary CSV output path");
  sim->add_option("--threads", sim_threads, "worker threads");
  sim->add_option("--set", sim_sets, "override section.key=value (repeatable)");
  sim->add_flag("--dump-config", sim_dump, "print the canonical config and exit");
  sim->callback([&] {
    ExperimentConfig cfg = load_with_overrides(sim_config, sim_sets);
    if (sim_dump) {
      std::cout << dump_config_text(cfg);
      return;
    }
    if (sim->count("--seed") == 0) throw ConfigError("seed", "--seed is required to run");
    if (sim_out.empty()) throw ConfigError("out", "--out is required to run");
    cfg.seed = sim_seed;
    cfg.threads = sim_threads;
    std::vector<RunRecord> records = run_universality(cfg, &std::cerr);
    std::vector<long> limit_counts;
    if (cfg.limit_replicates > 0) {
      std::vector<RunRecord> limit_records = run_limit_reference(cfg, &std::cerr);
      for (const auto& r : limit_records) limit_counts.push_back(r.report.count);
      records.insert(records.end(), std::make_move_iterator(limit_records.begin()),
                     std::make_move_iterator(limit_records.end()));
    }
    write_records_jsonl(sim_out, records);
    std::vector<CellStats> cells;
    for (const auto& law : cfg.laws)
      for (long n : cfg.n_list)
        cells.push_back(
            cell_stats(records, n, law.name(), limit_counts.empty() ? nullptr : &limit_counts));
    for (const auto& c : cells) {
      std::cout << "law=" << c.law << " n=" << c.n << " mean=" << format_shortest(c.mean)
                << " var=" << format_shortest(c.var) << " se=" << format_shortest(c.se);
      if (!limit_counts.empty())
        std::cout << " ks=" << format_shortest(c.ks_vs_limit)
                  << " tv=" << format_shortest(c.tv_vs_limit);
      std::cout << "\n";
    }
    if (!limit_counts.empty()) {
      const CellStats lc = cell_stats(records, 0, "limit", nullptr);
      std::cout << "law=limit mean=" << format_shortest(lc.mean)
                << " var=" << format_shortest(lc.var) << " se=" << format_shortest(lc.se) << "\n";
    }
    if (!sim_summary.empty()) write_summary_csv(sim_summary, cells);
  });

  // ------------------------------------------------------------------- limit
  auto* lim = app.add_subcommand("limit", "limit-process reference cell only");
  std::string lim_config, lim_out;
  std::vector<std::string> lim_sets;
  std::uint64_t lim_seed = 0;
  int lim_threads = 1;
  lim->add_option("--config", lim_config, "config file")->required();
  lim->add_option("--seed", lim_seed, "master seed")->required();
  lim->add_option("--out", lim_out, "records JSONL output path")->required();
  lim->add_option("--threads", lim_threads, "worker threads");
  lim->add_option("--set", lim_sets, "override section.key=value (repeatable)");
  lim->callback([&] {
    ExperimentConfig cfg = load_with_overrides(lim_config, lim_sets);
    cfg.seed = lim_seed;
    cfg.threads = lim_threads;
    const std::vector<RunRecord> records = run_limit_reference(cfg, &std::cerr);
    write_records_jsonl(lim_out, records);
    const CellStats lc = cell_stats(records, 0, "limit", nullptr);
    std::cout << "law=limit mean=" << format_shortest(lc.mean)
              << " var=" << format_shortest(lc.var) << " se=" << format_shortest(lc.se) << "\n";
  });

  // ----------------------------------------------------------------- compare
  auto* cmp = app.add_subcommand("compare", "KS/TV distance between two recorded count cells");
  std::string cmp_a, cmp_b, cmp_law_a, cmp_law_b = "limit";
  long cmp_n_a = 0, cmp_n_b = 0;
  double cmp_max_ks = -1.0, cmp_max_tv = -1.0;
  cmp->add_option("--a", cmp_a, "first records JSONL file")->required();
  cmp->add_option("--law-a", cmp_law_a, "law selector in --a")->required();
  cmp->add_option("--n-a", cmp_n_a, "n selector in --a")->required();
  cmp->add_option("--b", cmp_b, "second records JSONL file")->required();
  cmp->add_option("--law-b", cmp_law_b, "law selector in --b (default: limit)");
  cmp->add_option("--n-b", cmp_n_b, "n selector in --b (default: 0)");
  cmp->add_option("--max-ks", cmp_max_ks, "fail (exit 3) when KS exceeds this");
  cmp->add_option("--max-tv", cmp_max_tv, "fail (exit 3) when TV exceeds this");
  cmp->callback([&] {
    const auto ra = read_records_jsonl(cmp_a);
    const auto rb = read_records_jsonl(cmp_b);
    const auto ca = record_counts(ra, cmp_n_a, cmp_law_a);
    const auto cb = record_counts(rb, cmp_n_b, cmp_law_b);
    if (ca.empty())
      throw ConfigError("records", "no records law=" + cmp_law_a + " n=" +
                                       std::to_string(cmp_n_a) + " in '" + cmp_a + "'");
    if (cb.empty())
      throw ConfigError("records", "no records law=" + cmp_law_b + " n=" +
                                       std::to_string(cmp_n_b) + " in '" + cmp_b + "'");
    const CompareStats cs = compare_distributions(ca, cb);
    std::cout << "ks=" << format_shortest(cs.ks) << "\n"
              << "tv=" << format_shortest(cs.tv) << "\n"
              << "mean_a=" << format_shortest(cs.mean_a) << "\n"
              << "mean_b=" << format_shortest(cs.mean_b) << "\n"
              << "var_a=" << format_shortest(cs.var_a) << "\n"
              << "var_b=" << format_shortest(cs.var_b) << "\n";
    if ((cmp_max_ks >= 0.0 && cs.ks > cmp_max_ks) || (cmp_max_tv >= 0.0 && cs.tv > cmp_max_tv))
      exit_code = 3;
  });

  // ----------------------------------------------------------------- kacrice
  auto* kac = app.add_subcommand("kacrice", "expected zero count of the limit process");
  std::string kac_config;
  std::vector<std::string> kac_sets;
  kac->add_option("--config", kac_config, "config file (defaults apply without one)");
  kac->add_option("--set", kac_sets, "override section.key=value (repeatable)");
  kac->callback([&] {
    const ExperimentConfig cfg = load_with_overrides(kac_config, kac_sets);
    std::cout << format_shortest(kac_rice_expected(cfg.fn, cfg.window_a, cfg.window_b)) << "\n";
  });

  // ------------------------------------------------------------ diag-kernels
  auto* dk = app.add_subcommand("diag-kernels", "finite kernel vs limit kernel table");
  int dk_order = 0;
  double dk_x = 1.0;
  std::vector<long> dk_n;
  dk->add_option("--order", dk_order, "kernel order 0..2");
  dk->add_option("--x", dk_x, "evaluation point")->required();
  dk->add_option("--n", dk_n, "comma-separated n values")->required()->delimiter(',');
  dk->callback([&] {
    std::cout << "n,direct_re,direct_im,closed_re,closed_im,limit_re,limit_im,abs_gap\n";
    const auto lim_v = k_eval(dk_order, dk_x);
    for (long n : dk_n) {
      const auto d = kn_eval(dk_order, n, dk_x, KnMethod::direct);
      const auto c = kn_eval(dk_order, n, dk_x, KnMethod::closed);
      std::cout << n << "," << format_shortest(d.real()) << "," << format_shortest(d.imag())
                << "," << format_shortest(c.real()) << "," << format_shortest(c.imag()) << ","
                << format_shortest(lim_v.real()) << "," << format_shortest(lim_v.imag()) << ","
                << format_shortest(std::abs(c - lim_v)) << "\n";
    }
  });

  // ---------------------------------------------------------------- diag-cov
  auto* dc = app.add_subcommand("diag-cov", "ergodic-average vs limit covariance sup errors");
  std::string dc_config;
  std::vector<std::string> dc_sets;
  std::vector<long> dc_n;
  int dc_pairs = 10;
  dc->add_option("--config", dc_config, "config file (defaults apply without one)");
  dc->add_option("--set", dc_sets, "override section.key=value (repeatable)");
  dc->add_option("--n", dc_n, "comma-separated n values (default: experiment n list)")
      ->delimiter(',');
  dc->add_option("--pairs", dc_pairs, "grid points per axis");
  dc->callback([&] {
    const ExperimentConfig cfg = load_with_overrides(dc_config, dc_sets);
    const std::vector<long>& ns = dc_n.empty() ? cfg.n_list : dc_n;
    const CovDiagnostic diag = covariance_diagnostic(cfg.fn, cfg.freq, ns, cfg.window_a,
                                                     cfg.window_b, dc_pairs, cfg.spectrum_p);
    std::cout << "kind,n,sup_error\n";
    for (const auto& row : diag.rows)
      std::cout << row.kind << "," << row.n << "," << format_shortest(row.sup_error) << "\n";
    std::cout << "slope,C," << format_shortest(diag.slope_c) << "\n";
    std::cout << "slope,D," << format_shortest(diag.slope_d) << "\n";
    std::cout << "slope,E," << format_shortest(diag.slope_e) << "\n";
  });

  // ---------------------------------------------------------------- spectrum
  auto* sp = app.add_subcommand("spectrum", "Fourier coefficients of the configured function");
  std::string sp_config;
  std::vector<std::string> sp_sets;
  int sp_max_p = -1;
  sp->add_option("--config", sp_config, "config file (defaults apply without one)");
  sp->add_option("--set", sp_sets, "override section.key=value (repeatable)");
  sp->add_option("--max-p", sp_max_p, "truncation order (default: spectrum_p)");
  sp->callback([&] {
    const ExperimentConfig cfg = load_with_overrides(sp_config, sp_sets);
    const int P = sp_max_p >= 0 ? sp_max_p : cfg.spectrum_p;
    const FourierSpectrum spec = cfg.fn.fourier_spectrum(P);
    std::cout << "p,re,im,energy\n";
    for (int p = 0; p <= spec.max_p; ++p) {
      const auto c = spec.coeffs[static_cast<std::size_t>(p)];
      std::cout << p << "," << format_shortest(c.real()) << "," << format_shortest(c.imag())
                << "," << format_shortest(std::norm(c)) << "\n";
    }
    std::cout << "tail," << format_shortest(spec.tail_energy) << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
