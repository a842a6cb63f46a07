#include "sigzero/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "sigzero/errors.hpp"

namespace sigzero {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& field, const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw ConfigError(field, "expected a number, got an empty value");
  char* end = nullptr;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size())
    throw ConfigError(field, "cannot parse number '" + t + "'");
  if (!std::isfinite(v)) throw ConfigError(field, "number '" + t + "' is not finite");
  return v;
}

long parse_long(const std::string& field, const std::string& s) {
  const std::string t = trim(s);
  if (t.empty()) throw ConfigError(field, "expected an integer, got an empty value");
  char* end = nullptr;
  const long v = std::strtol(t.c_str(), &end, 10);
  if (end != t.c_str() + t.size())
    throw ConfigError(field, "cannot parse integer '" + t + "'");
  return v;
}

std::vector<double> parse_double_list(const std::string& field, const std::string& s) {
  std::vector<double> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_double(field, tok));
  return out;
}

std::vector<long> parse_long_list(const std::string& field, const std::string& s) {
  std::vector<long> out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_long(field, tok));
  return out;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_shortest(xs[i]);
  }
  return s;
}

// key=value pairs from a "k1=v1; k2=v2" spec string
std::map<std::string, std::string> spec_pairs(const std::string& field, const std::string& spec) {
  std::map<std::string, std::string> kv;
  for (const auto& part : split(spec, ';')) {
    if (part.empty()) continue;
    const auto eq = part.find('=');
    if (eq == std::string::npos)
      throw ConfigError(field, "expected key=value, got '" + part + "'");
    const std::string key = trim(part.substr(0, eq));
    const std::string val = trim(part.substr(eq + 1));
    if (key.empty()) throw ConfigError(field, "empty key in '" + part + "'");
    if (kv.count(key)) throw ConfigError(field, "duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

constexpr double kSqrt2 = 1.41421356237309504880168872420969808;

}  // namespace

PeriodicFunction parse_function_spec(const std::string& spec) {
  auto kv = spec_pairs("function", spec);
  const auto kind_it = kv.find("kind");
  if (kind_it == kv.end()) throw ConfigError("kind", "function spec needs kind=cos|pwl|harmonic");
  const std::string kind = kind_it->second;
  kv.erase(kind_it);

  const auto take = [&kv](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::string();
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  const auto reject_leftovers = [&kv, &kind] {
    if (!kv.empty())
      throw ConfigError(kv.begin()->first,
                        "unknown key for kind=" + kind + " function spec");
  };

  if (kind == "cos") {
    reject_leftovers();
    return PeriodicFunction::cosine();
  }
  if (kind == "pwl") {
    const std::string knots = take("knots");
    const std::string values = take("values");
    reject_leftovers();
    if (knots.empty()) throw ConfigError("knots", "kind=pwl needs a knots list");
    if (values.empty()) throw ConfigError("values", "kind=pwl needs a values list");
    return PeriodicFunction::pwl(parse_double_list("knots", knots),
                                 parse_double_list("values", values));
  }
  if (kind == "harmonic") {
    const std::string cosv = take("cos");
    const std::string sinv = take("sin");
    reject_leftovers();
    if (cosv.empty() && sinv.empty())
      throw ConfigError("cos", "kind=harmonic needs cos= and/or sin= lists");
    std::vector<double> cc = cosv.empty() ? std::vector<double>{} : parse_double_list("cos", cosv);
    std::vector<double> ss = sinv.empty() ? std::vector<double>{} : parse_double_list("sin", sinv);
    return PeriodicFunction::harmonic(std::move(cc), std::move(ss));
  }
  throw ConfigError("kind", "unknown function kind '" + kind + "'");
}

std::string dump_function_spec(const PeriodicFunction& f) {
  if (f.is_pwl()) {
    const auto& p = f.as_pwl();
    return "kind=pwl; knots=" + join_doubles(p.knots) + "; values=" + join_doubles(p.values);
  }
  const auto& h = f.as_harmonic();
  bool is_cos = h.cos_coeffs.size() == 2 && h.cos_coeffs[0] == 0.0 && h.cos_coeffs[1] == 1.0;
  for (double s : h.sin_coeffs)
    if (s != 0.0) is_cos = false;
  if (is_cos) return "kind=cos";
  std::string out = "kind=harmonic; cos=" + join_doubles(h.cos_coeffs);
  if (!h.sin_coeffs.empty()) out += "; sin=" + join_doubles(h.sin_coeffs);
  return out;
}

CoefficientLaw parse_law_spec(const std::string& spec) {
  const std::string t = trim(spec);
  if (t == "gaussian") return CoefficientLaw::gaussian();
  if (t == "rademacher") return CoefficientLaw::rademacher();
  if (t == "uniform") return CoefficientLaw::uniform_centered();
  if (t.rfind("discrete:", 0) == 0) {
    std::vector<double> values, probs;
    for (const auto& atom : split(t.substr(9), ';')) {
      const auto vp = split(atom, ',');
      if (vp.size() != 2)
        throw ConfigError("laws", "discrete atom '" + atom + "' must be value,probability");
      values.push_back(parse_double("laws", vp[0]));
      probs.push_back(parse_double("laws", vp[1]));
    }
    return CoefficientLaw::discrete(std::move(values), std::move(probs));
  }
  throw ConfigError("laws", "unknown law '" + t +
                                "' (expected gaussian|rademacher|uniform|discrete:v,p;...)");
}

FrequencySequence parse_alpha_spec(const std::string& spec) {
  const std::string t = trim(spec);
  if (t == "golden") return FrequencySequence::golden();
  if (t == "sqrt2") return FrequencySequence::with_alpha(kSqrt2);
  return FrequencySequence::with_alpha(parse_double("alpha", t));
}

std::map<std::string, std::map<std::string, std::string>> raw_from_text(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> raw;
  std::istringstream in(text);
  std::string line, section;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config", "line " + std::to_string(lineno) + ": unterminated section");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("config", "line " + std::to_string(lineno) + ": empty section name");
      raw[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config",
                        "line " + std::to_string(lineno) + ": expected key = value or [section]");
    if (section.empty())
      throw ConfigError("config",
                        "line " + std::to_string(lineno) + ": key before any [section]");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ConfigError("config", "line " + std::to_string(lineno) + ": empty key");
    if (raw[section].count(key))
      throw ConfigError("config",
                        "line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    raw[section][key] = trim(line.substr(eq + 1));
  }
  return raw;
}

ExperimentConfig config_from_raw(
    const std::map<std::string, std::map<std::string, std::string>>& raw) {
  for (const auto& [section, kv] : raw)
    if (section != "function" && section != "signal" && section != "experiment")
      throw ConfigError(section, "unknown config section");

  ExperimentConfig cfg;

  if (const auto fit = raw.find("function"); fit != raw.end()) {
    static const char* kOrder[] = {"kind", "knots", "values", "cos", "sin"};
    std::string spec;
    std::size_t used = 0;
    for (const char* key : kOrder) {
      const auto it = fit->second.find(key);
      if (it == fit->second.end()) continue;
      if (!spec.empty()) spec += "; ";
      spec += std::string(key) + "=" + it->second;
      ++used;
    }
    if (used != fit->second.size())
      for (const auto& [key, val] : fit->second)
        if (std::string(key) != "kind" && key != "knots" && key != "values" && key != "cos" &&
            key != "sin")
          throw ConfigError("function." + key, "unknown key");
    cfg.fn = parse_function_spec(spec);
  }
  cfg.fn_spec = dump_function_spec(cfg.fn);

  if (const auto sit = raw.find("signal"); sit != raw.end()) {
    for (const auto& [key, val] : sit->second) {
      if (key == "laws") {
        cfg.laws.clear();
        for (const auto& tok : split(val, '|')) cfg.laws.push_back(parse_law_spec(tok));
      } else if (key == "alpha") {
        cfg.freq = parse_alpha_spec(val);
        cfg.alpha_spec =
            (val == "golden" || val == "sqrt2") ? val : format_shortest(cfg.freq.alpha);
      } else {
        throw ConfigError("signal." + key, "unknown key");
      }
    }
  }
  if (cfg.laws.empty()) cfg.laws.push_back(CoefficientLaw::gaussian());

  if (const auto eit = raw.find("experiment"); eit != raw.end()) {
    for (const auto& [key, val] : eit->second) {
      if (key == "window") {
        const auto ab = parse_double_list("window", val);
        if (ab.size() != 2) throw ConfigError("window", "expected two numbers a,b");
        cfg.window_a = ab[0];
        cfg.window_b = ab[1];
      } else if (key == "n") {
        cfg.n_list = parse_long_list("n", val);
      } else if (key == "replicates") {
        cfg.replicates = parse_long("replicates", val);
      } else if (key == "limit_replicates") {
        cfg.limit_replicates = parse_long("limit_replicates", val);
      } else if (key == "grid_points") {
        cfg.grid_points = static_cast<int>(parse_long("grid_points", val));
      } else if (key == "oversample") {
        cfg.oversample = parse_double("oversample", val);
      } else if (key == "bisect_tol") {
        cfg.bisect_tol = parse_double("bisect_tol", val);
      } else if (key == "spectrum_p") {
        cfg.spectrum_p = static_cast<int>(parse_long("spectrum_p", val));
      } else {
        throw ConfigError("experiment." + key, "unknown key");
      }
    }
  }
  return cfg;
}

ExperimentConfig parse_config_text(const std::string& text) {
  return config_from_raw(raw_from_text(text));
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string dump_config_text(const ExperimentConfig& cfg) {
  std::string out = "[function]\n";
  for (const auto& part : split(cfg.fn_spec.empty() ? dump_function_spec(cfg.fn) : cfg.fn_spec,
                                ';')) {
    const auto eq = part.find('=');
    out += trim(part.substr(0, eq)) + " = " + trim(part.substr(eq + 1)) + "\n";
  }
  out += "\n[signal]\nlaws = ";
  for (std::size_t i = 0; i < cfg.laws.size(); ++i) {
    if (i) out += '|';
    out += cfg.laws[i].name();
  }
  out += "\nalpha = " + cfg.alpha_spec + "\n";
  out += "\n[experiment]\n";
  out += "window = " + format_shortest(cfg.window_a) + "," + format_shortest(cfg.window_b) + "\n";
  if (!cfg.n_list.empty()) {
    out += "n = ";
    for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(cfg.n_list[i]);
    }
    out += "\n";
  }
  out += "replicates = " + std::to_string(cfg.replicates) + "\n";
  out += "limit_replicates = " + std::to_string(cfg.limit_replicates) + "\n";
  out += "grid_points = " + std::to_string(cfg.grid_points) + "\n";
  out += "oversample = " + format_shortest(cfg.oversample) + "\n";
  out += "bisect_tol = " + format_shortest(cfg.bisect_tol) + "\n";
  out += "spectrum_p = " + std::to_string(cfg.spectrum_p) + "\n";
  return out;
}

void apply_override(std::map<std::string, std::map<std::string, std::string>>& raw,
                    const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("set", "override '" + assignment + "' must look like section.key=value");
  const std::string lhs = trim(assignment.substr(0, eq));
  const auto dot = lhs.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
    throw ConfigError("set", "override target '" + lhs + "' must look like section.key");
  raw[lhs.substr(0, dot)][lhs.substr(dot + 1)] = trim(assignment.substr(eq + 1));
}

}  // namespace sigzero
