#pragma once

#include <stdexcept>
#include <string>

namespace hylent {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad user input: invalid system, basis, key or configuration.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A function was evaluated outside its domain (e.g. triangle violation).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Base of errors caused by numerics rather than input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class DivergentIntegral : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

/// Legendre series of a ring integral did not converge within the cap.
class TruncationError : public NumericalError {
 public:
  TruncationError(const std::string& what, double partial_sum, double tail_estimate)
      : NumericalError(what), partial_sum(partial_sum), tail_estimate(tail_estimate) {}
  double partial_sum;
  double tail_estimate;
};

/// Overlap matrix not positive definite at working precision.
class IllConditionedBasis : public NumericalError {
 public:
  IllConditionedBasis(const std::string& what, double condition_estimate)
      : NumericalError(what), condition_estimate(condition_estimate) {}
  double condition_estimate;
};

class BracketError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DivergentSeries : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateSeries : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace hylent
