#pragma once

#include <stdexcept>
#include <string>

namespace xorcomm {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An enumeration or allocation would exceed the configured budget.
/// Raised before any work starts, never after partial results.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class AllZeroMatrix : public Error {
 public:
  AllZeroMatrix() : Error("game matrix has no nonzero coefficient") {}
};

/// Malformed input data (files, stochastic tables, answer tables).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The operation needs the exact normalization constant of a correlation game.
class ApproximateL : public Error {
 public:
  using Error::Error;
};

class InfeasiblePattern : public Error {
 public:
  using Error::Error;
};

}  // namespace xorcomm
