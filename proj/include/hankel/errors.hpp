#pragma once

#include <stdexcept>
#include <string>

namespace hankel {

/// Bad argument or violated precondition.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Numerical failure: non-convergence, divergence, overflow.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Adaptive quadrature ran out of subdivisions. Carries the last two
/// successive estimates so callers can judge how far off they were.
class QuadratureError : public NumericalError {
 public:
  QuadratureError(const std::string& what, double previous, double last)
      : NumericalError(what), previous_(previous), last_(last) {}

  double previous_estimate() const noexcept { return previous_; }
  double last_estimate() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

/// Integral over an unbounded range does not converge.
class DivergenceError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Value exceeds the representable range; use the log-space API instead.
class OverflowError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Malformed input document (JSON schema, expression grammar).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace hankel
