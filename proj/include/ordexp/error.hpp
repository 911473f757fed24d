#pragma once

#include <stdexcept>
#include <string>

namespace ordexp {

/// Broad failure class, used for CLI exit codes and machine-readable errors.
enum class ErrorCategory {
  domain,      // argument outside the mathematical domain
  validation,  // malformed input or configuration
  degenerate,  // data with a zero centered sum
  numeric,     // quadrature or root-finding did not converge
  bracket,     // no sign change across a root bracket
  io,
  internal,
};

const char* to_string(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error(ErrorCategory::domain, message) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(ErrorCategory::validation, message) {}
};

class DegenerateDataError : public Error {
 public:
  explicit DegenerateDataError(const std::string& message)
      : Error(ErrorCategory::degenerate, message) {}
};

/// Quadrature or iteration failure. Carries the best estimate reached and its error bound.
class NumericError : public Error {
 public:
  NumericError(const std::string& message, double best_estimate, double error_bound)
      : Error(ErrorCategory::numeric, message),
        best_estimate_(best_estimate),
        error_bound_(error_bound) {}

  double best_estimate() const noexcept { return best_estimate_; }
  double error_bound() const noexcept { return error_bound_; }

 private:
  double best_estimate_;
  double error_bound_;
};

class BracketError : public Error {
 public:
  explicit BracketError(const std::string& message) : Error(ErrorCategory::bracket, message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorCategory::io, message) {}
};

class InternalError : public Error {
 public:
  explicit InternalError(const std::string& message) : Error(ErrorCategory::internal, message) {}
};

}  // namespace ordexp
