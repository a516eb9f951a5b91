#pragma once

#include <stdexcept>
#include <string>

namespace rswave {

/// Invalid or inconsistent run configuration. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure (quadrature non-convergence, CFL violation, degenerate
/// spectral point, ...). CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rswave
