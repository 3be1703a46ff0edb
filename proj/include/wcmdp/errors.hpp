#pragma once

#include <stdexcept>
#include <string>

namespace wcmdp {

/// Caller broke a documented precondition (shape mismatch, bad argument).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The simplex kernel could not finish (tiny pivot, iteration cap, drift).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A right inverse was requested for a matrix without full row rank.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation restricted to a model family the input does not belong to.
class UnsupportedModel : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Randomized rounding requested outside its admissible family.
class UnsupportedRounding : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Model or preset text could not be parsed.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wcmdp
