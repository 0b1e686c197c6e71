#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ceap {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input violates a precondition (bad length, malformed file, bad option).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not produce a result.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Laguerre iteration did not converge for the warm start at `index()`.
class LaguerreFailure : public NumericalFailure {
 public:
  LaguerreFailure(std::size_t index, const std::string& what)
      : NumericalFailure(what), index_(index) {}

  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

}  // namespace ceap
