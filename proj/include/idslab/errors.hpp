#pragma once

#include <stdexcept>
#include <string>

namespace idslab {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Configuration file failed validation. Carries the offending field path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& msg)
      : Error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A Foelner sequence violates I_j <= I_{j+1}.
class NonMonotoneSequence : public Error {
 public:
  using Error::Error;
};

/// A model demanding V >= 0 produced a negative potential value.
class NegativePotential : public Error {
 public:
  using Error::Error;
};

/// A realization was queried outside its materialized window.
class WindowTooSmall : public Error {
 public:
  using Error::Error;
};

/// Dense eigensolve requested above the configured size cap.
class OracleCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Symmetric factorization hit a pivot below tolerance (shift on spectrum).
class PivotBreakdown : public Error {
 public:
  using Error::Error;
};

/// Periodic-only operation invoked on a model with random components.
class NotPeriodic : public Error {
 public:
  using Error::Error;
};

/// Too few usable rows to fit the requested scaling law.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

}  // namespace idslab
