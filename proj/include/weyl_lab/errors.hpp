#pragma once

#include <stdexcept>
#include <string>

namespace weyl_lab {

/// Dimension outside the supported range (memory guard for dense enumeration).
class UnsupportedDimension : public std::invalid_argument {
public:
  explicit UnsupportedDimension(int n)
      : std::invalid_argument("unsupported dimension n=" + std::to_string(n)), dimension(n) {}
  int dimension;
};

/// A Fourier cutoff that the sampling grid or coefficient table cannot resolve.
class AliasingError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Problem size above the configured limit.
class ResourceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string& what, double achieved)
      : std::runtime_error(what + " (achieved error estimate " + std::to_string(achieved) + ")"),
        achieved_tolerance(achieved) {}
  double achieved_tolerance;
};

class InsufficientData : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Violated operation precondition (bad parameter range, mismatched inputs).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

} // namespace weyl_lab
