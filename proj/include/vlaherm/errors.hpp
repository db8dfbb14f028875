#pragma once

#include <stdexcept>
#include <string>

namespace vlaherm {

// Bad user input: unknown scenario, inconsistent run parameters, unparsable config.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Runtime failure of the numerics: CFL violation, blow-up, incompatible Poisson data.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// File problems, always carrying the offending path.
struct IoError : std::runtime_error {
  IoError(const std::string& path, const std::string& what)
      : std::runtime_error(path + ": " + what) {}
};

}  // namespace vlaherm
