#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdsmc {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// An input violates a documented precondition (non-stochastic rows, zero
/// entries where positivity is required, reducible chain, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class NotErgodicError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

/// M(i,j) > 0 while M(j,i) == 0. Indices are 0-based; messages print them
/// 1-based.
class SupportAsymmetryError : public PreconditionError {
 public:
  SupportAsymmetryError(std::size_t i, std::size_t j)
      : PreconditionError("support asymmetry: M(" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ") > 0 but M(" + std::to_string(j + 1) +
                          "," + std::to_string(i + 1) + ") = 0"),
        i_(i),
        j_(j) {}

  std::size_t i() const noexcept { return i_; }
  std::size_t j() const noexcept { return j_; }

 private:
  std::size_t i_;
  std::size_t j_;
};

/// An enumeration would exceed its desk-scale cap.
class CapExceededError : public Error {
 public:
  using Error::Error;
};

/// Two routes that must agree did not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

/// Coupling from the past did not coalesce before the requested horizon.
class NoCoalescenceError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdsmc
