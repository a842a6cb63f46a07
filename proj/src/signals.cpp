#include "sigzero/signals.hpp"

#include <charconv>
#include <cmath>
#include <limits>

#include "sigzero/errors.hpp"
#include "sigzero/num.hpp"

namespace sigzero {

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

constexpr double kSqrt3 = 1.7320508075688772935274463415058724;

}  // namespace

CoefficientLaw CoefficientLaw::gaussian() { return CoefficientLaw{LawKind::gaussian, {}, {}}; }

CoefficientLaw CoefficientLaw::rademacher() { return CoefficientLaw{LawKind::rademacher, {}, {}}; }

CoefficientLaw CoefficientLaw::uniform_centered() {
  return CoefficientLaw{LawKind::uniform_centered, {}, {}};
}

CoefficientLaw CoefficientLaw::discrete(std::vector<double> values, std::vector<double> probs) {
  if (values.empty() || values.size() != probs.size())
    throw ConfigError("laws", "discrete law needs matching value/probability lists");
  double psum = 0.0, mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(probs[i] > 0.0)) throw ConfigError("laws", "discrete probabilities must be > 0");
    if (!std::isfinite(values[i])) throw ConfigError("laws", "discrete values must be finite");
    psum += probs[i];
    mean += probs[i] * values[i];
  }
  for (std::size_t i = 0; i < values.size(); ++i) var += probs[i] * values[i] * values[i];
  if (std::abs(psum - 1.0) > 1e-12)
    throw ConfigError("laws", "discrete probabilities must sum to 1 (got " + shortest(psum) + ")");
  if (std::abs(mean) > 1e-12)
    throw ConfigError("laws", "discrete law must be centered (mean " + shortest(mean) + ")");
  if (std::abs(var - 1.0) > 1e-12)
    throw ConfigError("laws", "discrete law must have unit variance (got " + shortest(var) + ")");
  return CoefficientLaw{LawKind::discrete_custom, std::move(values), std::move(probs)};
}

double CoefficientLaw::fourth_moment() const {
  switch (kind) {
    case LawKind::gaussian:
      return 3.0;
    case LawKind::rademacher:
      return 1.0;
    case LawKind::uniform_centered:
      return 9.0 / 5.0;  // E[(sqrt3 (2U-1))^4]
    default: {
      double m4 = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double v2 = values[i] * values[i];
        m4 += probs[i] * v2 * v2;
      }
      return m4;
    }
  }
}

std::string CoefficientLaw::name() const {
  switch (kind) {
    case LawKind::gaussian:
      return "gaussian";
    case LawKind::rademacher:
      return "rademacher";
    case LawKind::uniform_centered:
      return "uniform";
    default: {
      std::string s = "discrete:";
      for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ';';
        s += shortest(values[i]);
        s += ',';
        s += shortest(probs[i]);
      }
      return s;
    }
  }
}

std::vector<double> CoefficientLaw::sample_coefficients(long n, std::mt19937_64& stream) const {
  std::vector<double> out(static_cast<std::size_t>(n));
  switch (kind) {
    case LawKind::gaussian: {
      GaussianDraw gauss;
      for (auto& v : out) v = gauss(stream);
      break;
    }
    case LawKind::rademacher:
      for (auto& v : out) v = (stream() >> 63) ? 1.0 : -1.0;
      break;
    case LawKind::uniform_centered:
      for (auto& v : out) v = kSqrt3 * (2.0 * uniform01(stream) - 1.0);
      break;
    default:
      for (auto& v : out) {
        const double u = uniform01(stream);
        double cum = 0.0;
        v = values.back();
        for (std::size_t i = 0; i < values.size(); ++i) {
          cum += probs[i];
          if (u < cum) {
            v = values[i];
            break;
          }
        }
      }
      break;
  }
  return out;
}

FrequencySequence FrequencySequence::golden() {
  FrequencySequence fs;
  fs.alpha = kPi * ((std::sqrt(5.0) - 1.0) / 2.0);
  return fs;
}

FrequencySequence FrequencySequence::with_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < kTwoPi))
    throw ConfigError("alpha", "must lie in (0, 2*pi)");
  FrequencySequence fs;
  fs.alpha = alpha;
  return fs;
}

FrequencySequence FrequencySequence::explicit_list(std::vector<long> pn) {
  if (pn.empty()) throw ConfigError("alpha", "explicit p_n list must be non-empty");
  for (long v : pn)
    if (v < 0) throw ConfigError("alpha", "explicit p_n must be >= 0");
  FrequencySequence fs;
  fs.explicit_pn = std::move(pn);
  return fs;
}

long FrequencySequence::pn(long n) const {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (!explicit_pn.empty()) {
    if (static_cast<std::size_t>(n) > explicit_pn.size())
      throw ConfigError("alpha", "no explicit p_n entry for n=" + std::to_string(n));
    return explicit_pn[static_cast<std::size_t>(n - 1)];
  }
  // exact floor(n * alpha) via the double-double product
  const auto [hi, lo] = two_prod(static_cast<double>(n), alpha);
  double q = std::floor(hi);
  double r = (hi - q) + lo;
  if (r >= 1.0) q += 1.0;
  if (r < 0.0) q -= 1.0;
  return static_cast<long>(q);
}

SignalInstance::SignalInstance(PeriodicFunction f_, long n_, long pn_, std::vector<double> coeffs_)
    : n(n_), pn(pn_), coeffs(std::move(coeffs_)), f(std::move(f_)) {
  if (n < 1) throw ConfigError("n", "must be >= 1");
  if (pn < 0) throw ConfigError("pn", "must be >= 0");
  if (coeffs.size() != static_cast<std::size_t>(n))
    throw ConfigError("n", "coefficient count must equal n");
  if (pn > 0 && n > (1LL << 53) / pn)
    throw ConfigError("n", "n * p_n exceeds the exact-integer range");
  phase0.resize(static_cast<std::size_t>(n));
  for (long k = 1; k <= n; ++k)
    phase0[static_cast<std::size_t>(k - 1)] = phase_mod_two_pi(k * pn, n);
  inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
}

double SignalInstance::eval(double t) const {
  const double dn = static_cast<double>(n);
  NeumaierSum acc;
  for (long k = 1; k <= n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    const double arg = reduce_two_pi(phase0[i] + (static_cast<double>(k) / dn) * t);
    acc.add(coeffs[i] * f.eval_reduced(arg));
  }
  return inv_sqrt_n * acc.value();
}

double SignalInstance::eval_derivative(double t) const {
  const double dn = static_cast<double>(n);
  NeumaierSum acc;
  for (long k = 1; k <= n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - 1);
    const double kn = static_cast<double>(k) / dn;
    const double arg = reduce_two_pi(phase0[i] + kn * t);
    acc.add(coeffs[i] * kn * f.deriv_reduced(arg));
  }
  return inv_sqrt_n * acc.value();
}

}  // namespace sigzero
