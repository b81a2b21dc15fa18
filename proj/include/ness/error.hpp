#pragma once

#include <stdexcept>
#include <string>

namespace ness {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// A numerical routine broke down (singular matrix, non-real spectrum, ...).
class NumericalError : public Error {
public:
  using Error::Error;
};

/// Adaptive quadrature hit its depth cap before reaching the tolerance.
class QuadratureError : public Error {
public:
  QuadratureError(const std::string& what, double estimate, double error_estimate)
      : Error(what), estimate_(estimate), error_estimate_(error_estimate) {}

  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_estimate_; }

private:
  double estimate_;
  double error_estimate_;
};

}  // namespace ness
