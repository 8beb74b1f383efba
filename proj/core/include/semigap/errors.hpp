#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace semigap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (dimension mismatch, negative
/// step, non-linear method handed to a linear-only routine, ...).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

/// An evaluation left the domain family X_t or the regular family X'_t.
class DomainExit : public Error {
 public:
  DomainExit(std::string stage, double t, std::vector<double> state, int step_index = -1);

  const std::string& stage() const noexcept { return stage_; }
  double time() const noexcept { return time_; }
  const std::vector<double>& state() const noexcept { return state_; }
  int step_index() const noexcept { return step_index_; }

 private:
  std::string stage_;
  double time_;
  std::vector<double> state_;
  int step_index_;
};

/// A method step produced a non-finite coordinate.
class BlowupDetected : public Error {
 public:
  explicit BlowupDetected(double dt, int step_index = -1);

  double dt() const noexcept { return dt_; }
  int step_index() const noexcept { return step_index_; }

 private:
  double dt_;
  int step_index_;
};

/// No admissible sample survived the gates (pair distance, domain membership).
class EmptySample : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ConfigFileError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class ConfigParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Validation failure; `key()` names the offending configuration key.
class ConfigValidationError : public ConfigError {
 public:
  ConfigValidationError(std::string key, const std::string& message);
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace semigap
