#pragma once

#include <stdexcept>
#include <string>

namespace cavspec {

/// Invalid input, configuration, or precondition. The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical breakdown: non-convergence, instability, residual blow-up.
/// Never silent; the CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cavspec
