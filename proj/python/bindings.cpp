#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sigzero/config.hpp"
#include "sigzero/errors.hpp"
#include "sigzero/experiments.hpp"
#include "sigzero/kernels.hpp"
#include "sigzero/limit_process.hpp"
#include "sigzero/signals.hpp"
#include "sigzero/zeros.hpp"

namespace py = pybind11;
using namespace sigzero;

namespace {

ErgodicKind kind_of(const std::string& kind) {
  if (kind == "C") return ErgodicKind::C;
  if (kind == "D") return ErgodicKind::D;
  if (kind == "E") return ErgodicKind::E;
  throw ConfigError("kind", "must be one of C, D, E");
}

KnMethod method_of(const std::string& method) {
  if (method == "closed") return KnMethod::closed;
  if (method == "direct") return KnMethod::direct;
  throw ConfigError("method", "must be 'closed' or 'direct'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "zero-count statistics of randomized periodic sums and their Gaussian limit";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<PeriodicFunction>(m, "PeriodicFunction")
      .def_static("pwl", &PeriodicFunction::pwl, py::arg("knots"), py::arg("values"),
                  "piecewise-linear periodic function on [0, 2pi]")
      .def_static("harmonic", &PeriodicFunction::harmonic, py::arg("cos_coeffs"),
                  py::arg("sin_coeffs"), "finite trigonometric polynomial")
      .def_static("cosine", &PeriodicFunction::cosine)
      .def("eval", &PeriodicFunction::eval, py::arg("t"))
      .def("eval_derivative", &PeriodicFunction::eval_derivative, py::arg("t"))
      .def("is_pwl", &PeriodicFunction::is_pwl);

  m.def("parse_function_spec", &parse_function_spec, py::arg("spec"),
        "build a function from a spec string like 'kind=cos'");
  m.def("dump_function_spec", &dump_function_spec, py::arg("f"));
  m.def(
      "fourier_coefficients",
      [](const PeriodicFunction& f, int max_p) {
        const FourierSpectrum s = f.fourier_spectrum(max_p);
        return py::make_tuple(s.coeffs, s.tail_energy);
      },
      py::arg("f"), py::arg("max_p"),
      "coefficients for p = 0..max_p plus the truncated tail energy");
  m.def("inner_product", &inner_product, py::arg("f"), py::arg("g"));
  m.def("derivative_inner_product", &derivative_inner_product, py::arg("f"), py::arg("g"));

  m.def("k_eval", &k_eval, py::arg("order"), py::arg("x"),
        "limit kernel i^j int_0^1 u^j e^{iux} du");
  m.def(
      "kn_eval",
      [](int order, long n, double x, const std::string& method) {
        return kn_eval(order, n, x, method_of(method));
      },
      py::arg("order"), py::arg("n"), py::arg("x"), py::arg("method") = "closed",
      "finite n-term kernel; method 'closed' or 'direct'");
  m.def(
      "ergodic_sum",
      [](const std::string& kind, const PeriodicFunction& g, const PeriodicFunction& h, double s,
         double t, long n, long pn) { return ergodic_sum(kind_of(kind), g, h, s, t, n, pn); },
      py::arg("kind"), py::arg("g"), py::arg("h"), py::arg("s"), py::arg("t"), py::arg("n"),
      py::arg("pn"), "finite-n expectation average; kind 'C', 'D', or 'E'");
  m.def(
      "ergodic_limit",
      [](const std::string& kind, const PeriodicFunction& g, const PeriodicFunction& h, double u,
         int max_p) {
        return ergodic_limit(kind_of(kind), g.fourier_spectrum(max_p), h.fourier_spectrum(max_p),
                             u);
      },
      py::arg("kind"), py::arg("g"), py::arg("h"), py::arg("u"), py::arg("max_p") = 512,
      "n -> infinity limit of the matching ergodic sum");

  py::class_<CovarianceModel>(m, "CovarianceModel")
      .def(py::init<PeriodicFunction, int>(), py::arg("f"), py::arg("max_p"))
      .def("rho", &CovarianceModel::rho, py::arg("order"), py::arg("u"),
           "stationary covariance derivative of the limit process")
      .def("rho2_gap", &CovarianceModel::rho2_gap, py::arg("t"))
      .def("f_energy", &CovarianceModel::f_energy)
      .def("fprime_energy", &CovarianceModel::fprime_energy)
      .def("cov_matrix", &CovarianceModel::cov_matrix, py::arg("times"),
           "joint covariance of values and derivatives, 2m x 2m nested lists");

  m.def("kac_rice_expected", &kac_rice_expected, py::arg("f"), py::arg("a"), py::arg("b"),
        "expected zero count of the limit process on [a, b]");

  m.def("golden_alpha", [] { return FrequencySequence::golden().alpha; });
  m.def(
      "pn_golden", [](long n) { return FrequencySequence::golden().pn(n); }, py::arg("n"),
      "floor(n * alpha) for the golden-rotation preset");
  m.def(
      "pn_for_alpha", [](double alpha, long n) { return FrequencySequence::with_alpha(alpha).pn(n); },
      py::arg("alpha"), py::arg("n"));
  m.def(
      "sample_coefficients",
      [](const std::string& law_spec, long n, std::uint64_t seed, std::uint64_t stream) {
        auto g = make_stream(seed, stream);
        return parse_law_spec(law_spec).sample_coefficients(n, g);
      },
      py::arg("law"), py::arg("n"), py::arg("seed"), py::arg("stream") = 0,
      "draw n iid coefficients; law 'gaussian', 'rademacher', 'uniform', or 'discrete:...'");

  py::class_<SignalInstance>(m, "SignalInstance")
      .def(py::init<PeriodicFunction, long, long, std::vector<double>>(), py::arg("f"),
           py::arg("n"), py::arg("pn"), py::arg("coeffs"))
      .def_readonly("n", &SignalInstance::n)
      .def_readonly("pn", &SignalInstance::pn)
      .def_readonly("coeffs", &SignalInstance::coeffs)
      .def("eval", &SignalInstance::eval, py::arg("t"))
      .def("eval_derivative", &SignalInstance::eval_derivative, py::arg("t"));

  py::class_<ZeroReport>(m, "ZeroReport")
      .def_readonly("count", &ZeroReport::count)
      .def_readonly("locations", &ZeroReport::locations)
      .def_readonly("degenerate", &ZeroReport::degenerate)
      .def_readonly("method", &ZeroReport::method)
      .def("to_json", &ZeroReport::to_json)
      .def("__repr__", [](const ZeroReport& r) {
        return "<ZeroReport count=" + std::to_string(r.count) + " method=" + r.method + ">";
      });

  m.def("count_zeros_pwl", &count_zeros_pwl, py::arg("signal"), py::arg("a"), py::arg("b"),
        "exact zero count for piecewise-linear signals");
  m.def("count_zeros_bracketed", &count_zeros_bracketed, py::arg("path"), py::arg("a"),
        py::arg("b"), py::arg("max_freq"), py::arg("oversample") = 8.0,
        py::arg("tol") = 1e-12, "sampling + bisection count for smooth callables");
  m.def("breakpoints", &breakpoints, py::arg("signal"), py::arg("a"), py::arg("b"));

  m.def(
      "sample_limit_grid",
      [](const CovarianceModel& model, const std::vector<double>& times, std::uint64_t seed,
         std::uint64_t stream) {
        auto g = make_stream(seed, stream);
        const GridSample s = sample_limit_grid(model, times, g);
        return py::make_tuple(s.values, s.derivs);
      },
      py::arg("model"), py::arg("times"), py::arg("seed"), py::arg("stream") = 0,
      "one Gaussian draw of (values, derivatives) on the given time grid");

  py::class_<SpectralPath>(m, "SpectralPath")
      .def("eval", &SpectralPath::eval, py::arg("t"))
      .def("eval_derivative", &SpectralPath::eval_derivative, py::arg("t"));
  m.def(
      "sample_limit_spectral",
      [](const CovarianceModel& model, int M, std::uint64_t seed, std::uint64_t stream) {
        auto g = make_stream(seed, stream);
        return sample_limit_spectral(model, M, g);
      },
      py::arg("model"), py::arg("M"), py::arg("seed"), py::arg("stream") = 0,
      "randomized-frequency path with the exact limit covariance for any M");
  m.def(
      "count_zeros_limit",
      [](const CovarianceModel& model, double a, double b, int grid_points, std::uint64_t seed,
         std::uint64_t stream) {
        auto g = make_stream(seed, stream);
        return count_zeros_limit(model, a, b, grid_points, g);
      },
      py::arg("model"), py::arg("a"), py::arg("b"), py::arg("grid_points"), py::arg("seed"),
      py::arg("stream") = 0, "zero count of one limit-process draw on a uniform grid");
}
