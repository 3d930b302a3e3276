#pragma once

#include <stdexcept>
#include <string>

namespace uqkd {

/// Base for every error raised by the library. The CLI maps subclasses onto
/// process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A root search or iterative procedure failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent configuration. `field()` names the offending key.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, const std::string& message)
      : Error(field.empty() ? message : field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// Filesystem failures, always carrying the path involved.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A persisted file failed its checksum or structural checks.
class IntegrityError : public IoError {
 public:
  using IoError::IoError;
};

}  // namespace uqkd
