#pragma once

#include <map>
#include <string>
#include <vector>

#include "sigzero/experiments.hpp"

namespace sigzero {

// Function spec strings: "kind=cos", "kind=pwl; knots=...; values=...",
// "kind=harmonic; cos=...; sin=...". Errors raise ConfigError naming the
// offending field.
PeriodicFunction parse_function_spec(const std::string& spec);
std::string dump_function_spec(const PeriodicFunction& f);

// Law strings: gaussian | rademacher | uniform | discrete:v1,p1;v2,p2;...
CoefficientLaw parse_law_spec(const std::string& spec);

// Alpha spec: "golden", "sqrt2", or a numeric literal in (0, 2pi).
FrequencySequence parse_alpha_spec(const std::string& spec);

// Plain key=value config text with [section] headers; '#' comments.
// Sections/keys: [function] kind, knots, values, cos, sin;
// [signal] laws, alpha; [experiment] window, n, replicates,
// limit_replicates, grid_points, oversample, bisect_tol, spectrum_p.
// Unknown sections or keys are rejected. Seed/threads/output come from CLI
// flags, never from the file.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);
// Canonical form; parse(dump(cfg)) == dump-identical round trip.
std::string dump_config_text(const ExperimentConfig& cfg);

// Apply "section.key=value" override strings.
void apply_override(std::map<std::string, std::map<std::string, std::string>>& raw,
                    const std::string& assignment);
ExperimentConfig config_from_raw(
    const std::map<std::string, std::map<std::string, std::string>>& raw);
std::map<std::string, std::map<std::string, std::string>> raw_from_text(const std::string& text);

}  // namespace sigzero
