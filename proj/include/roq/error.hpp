#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace roq {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand lengths or matrix shapes disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument values (bad counts, reversed intervals, unknown names).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// Input outside the mathematical domain of a function (nonpositive mass, frequency, weight).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// An iterative method exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double last_estimate, std::size_t index = 0)
      : Error(what), last_estimate_(last_estimate), index_(index) {}

  double last_estimate() const noexcept { return last_estimate_; }
  std::size_t index() const noexcept { return index_; }

 private:
  double last_estimate_;
  std::size_t index_;
};

/// A triangular or dense system has a (numerically) zero pivot.
class SingularError : public Error {
 public:
  using Error::Error;
};

/// Vectors that should be independent are not: Gram-Schmidt breakdown, zero-norm
/// columns, dependent DEIM columns, degenerate decay fits.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

/// Gram-Schmidt breakdown while re-orthogonalizing on a resampled grid.
class ResolutionError : public DegenerateError {
 public:
  using DegenerateError::DegenerateError;
};

}  // namespace roq
