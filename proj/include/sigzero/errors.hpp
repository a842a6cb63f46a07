#pragma once

#include <stdexcept>
#include <string>

namespace sigzero {

// Invalid user-facing configuration; `field` names the offending key.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string field_, const std::string& msg)
      : std::runtime_error("config error: field '" + field_ + "': " + msg),
        field(std::move(field_)) {}
};

// Numerical failure (factorization breakdown, non-finite values, ...).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sigzero
