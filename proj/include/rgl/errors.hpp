#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace rgl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: non-Hermitian matrices, dimension mismatches, bad parameters.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An argument lies outside the domain of a function (log of a non-positive
/// eigenvalue, alpha = 0, ...). `value()` holds the offending number.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double value) : Error(what), value_(value) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

/// A numerical procedure failed to reach its tolerance. `residual()` is the
/// last observed discrepancy.
class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double residual) : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// A perturbed state left the positive cone. `min_eigenvalue()` reports how far.
class RangeError : public Error {
 public:
  RangeError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

}  // namespace rgl
