#pragma once

#include <stdexcept>
#include <string>

namespace chlag {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Initial data that is not finite or violates its invariants.
class DataError : public Error {
 public:
  using Error::Error;
};

/// A non-finite value appeared during evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The time integrator could not produce an admissible state (e.g. v <= 0).
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// A hard a-priori bound was violated.
class DiagnosticError : public Error {
 public:
  using Error::Error;
};

/// Characteristic positions are inconsistent (x decreasing in Z).
class StateError : public Error {
 public:
  using Error::Error;
};

/// Caller violated a documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Eulerian oracle stopped because the slope exceeded its guard.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double time) : Error(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace chlag
