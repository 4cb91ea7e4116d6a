#pragma once

#include <stdexcept>
#include <string>

namespace sspanel {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid user-supplied configuration, argument, or precondition
/// violation (CLI exit code 2).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Input out of a function's mathematical domain (non-finite argument,
/// zero direction vector, ...). A kind of configuration error for exit
/// code purposes.
class DomainError : public ConfigError {
 public:
  explicit DomainError(const std::string& what) : ConfigError(what) {}
};

/// Data degenerate for the requested computation, e.g. a sample whose
/// outcome differences are identically zero (CLI exit code 3).
class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& what) : Error(what) {}
};

/// Problem size exceeds a configured capacity cap for an exact method
/// (CLI exit code 4). The message names the fallback to use.
class CapacityError : public Error {
 public:
  explicit CapacityError(const std::string& what) : Error(what) {}
};

/// An internal self-check failed (e.g. a certificate failed its own
/// verification). Never indicates bad user input.
class InternalError : public Error {
 public:
  explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace sspanel
