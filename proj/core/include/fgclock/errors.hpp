#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fgclock {

// Base of every error thrown by the library. Subclasses map one-to-one onto
// the failure categories the CLI turns into distinct exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parameter lies outside its domain (negative sigma, non-positive rate...).
class ParameterError : public Error {
 public:
  ParameterError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

// Sequence lengths are inconsistent or empty.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// The request is well-formed but the configuration is not supported by the
// chosen routine (e.g. sigma == 0 where the density degenerates).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

// Problem too large for an enumeration-based routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Misuse of an index-based API (k > m, level out of range).
class UsageError : public Error {
 public:
  using Error::Error;
};

// An iterative solver did not converge. Carries the last iterate.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> last_iterate)
      : Error(what), last_iterate_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept {
    return last_iterate_;
  }

 private:
  std::vector<double> last_iterate_;
};

// The discretization grid does not contain the optimum.
class CoverageError : public Error {
 public:
  using Error::Error;
};

}  // namespace fgclock
