#pragma once

#include <stdexcept>
#include <string>

namespace tcomb {

/// Invalid physical parameters or malformed inputs.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature did not reach the requested tolerance.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double value, double error_estimate)
      : std::runtime_error(what), value_(value), error_estimate_(error_estimate) {}

  double value() const noexcept { return value_; }
  double error_estimate() const noexcept { return error_estimate_; }

 private:
  double value_;
  double error_estimate_;
};

/// An N-scan whose argmin sits on the edge of the scanned range.
class NoBracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Measurement operating point is unusable (e.g. coherence collapsed).
class OperatingPointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tcomb
