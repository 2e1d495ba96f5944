#pragma once

#include <stdexcept>
#include <string>

namespace ratnear {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector/matrix argument whose size disagrees with the object it is used with.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (delta > 1/2,
/// division by zero inside an expression, radius <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class NonDifferentiableError : public Error {
 public:
  using Error::Error;
};

/// Raised when exact rational arithmetic is requested for a map that is not a
/// polynomial with rational coefficients.
class NonPolynomialError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_residual)
      : Error(what), best_residual_(best_residual) {}
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

class OutsideImageError : public Error {
 public:
  using Error::Error;
};

class IllConditionedError : public Error {
 public:
  using Error::Error;
};

/// Enumeration or quadrature would exceed the configured work cap.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// The curvature condition could not be verified for a chart.
class CurvatureRefusal : public Error {
 public:
  using Error::Error;
};

/// A matrix family failed its pencil nonsingularity certificate.
class CertificateFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace ratnear
