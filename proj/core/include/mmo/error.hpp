#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmo {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument violates a documented precondition (bad parameters, empty
/// range, out-of-domain value). The CLI maps this to a usage error.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge or a search found no root/crossing.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Time integration aborted. Carries the last time at which the state was
/// still finite and valid.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_valid_time)
      : Error(what), last_valid_time_(last_valid_time) {}

  double last_valid_time() const noexcept { return last_valid_time_; }

 private:
  double last_valid_time_;
};

/// A stochastic simulation would exceed its event budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// Error raised inside an ensemble member, tagged with the member's index.
class PathError : public Error {
 public:
  PathError(std::size_t path, const std::string& what)
      : Error("path " + std::to_string(path) + ": " + what), path_(path) {}

  std::size_t path() const noexcept { return path_; }

 private:
  std::size_t path_;
};

}  // namespace mmo
