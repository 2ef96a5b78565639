#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace lmles {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text; `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A domain-type invariant does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A request would exceed a configured resource ceiling.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Fields or spaces that must share a mesh or space do not.
class SpaceMismatch : public Error {
 public:
  using Error::Error;
};

/// Linear system is (numerically) singular.
class SingularSystemError : public Error {
 public:
  using Error::Error;
};

/// Derivative undefined at the requested linearization point.
class SingularJacobianError : public Error {
 public:
  using Error::Error;
};

/// The nonlinear solve of one time step failed after all fallbacks.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, int step, std::vector<double> residual_history);
  int step() const noexcept { return step_; }
  const std::vector<double>& residual_history() const noexcept { return history_; }

 private:
  int step_;
  std::vector<double> history_;
};

}  // namespace lmles
