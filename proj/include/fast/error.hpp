#pragma once

#include <stdexcept>
#include <string>

namespace fast {

/// Coarse failure class. The CLI maps each to a distinct exit status.
enum class ErrorKind { config, infeasible, numeric, io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Bad input: precondition violations, malformed files, invalid parameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

/// The constraints cannot be met (fidelity target above the full model, or
/// latency budget below what maximum resources allow).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what) : Error(ErrorKind::infeasible, what) {}
};

/// Numerical breakdown: bracket not found, iteration cap, domain violation.
class NumericError : public Error {
 public:
  explicit NumericError(const std::string& what) : Error(ErrorKind::numeric, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

}  // namespace fast
