#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kfks {

/// Broad failure classes; the CLI maps these onto exit codes.
enum class ErrorCategory {
  usage,
  invalid_state,
  degenerate_moments,
  domain,
  correction_failure,
  precondition,
};

const char* to_string(ErrorCategory c) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& what)
      : std::runtime_error(what), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorCategory::usage, what) {}
};

// NaN/Inf found in a distribution buffer.
class InvalidStateError : public Error {
 public:
  explicit InvalidStateError(const std::string& what)
      : Error(ErrorCategory::invalid_state, what) {}
};

// rho <= 0 or T <= 0 in some cell.
class DegenerateMomentsError : public Error {
 public:
  DegenerateMomentsError(std::size_t cell, const std::string& what)
      : Error(ErrorCategory::degenerate_moments, what), cell_(cell) {}

  std::size_t cell() const noexcept { return cell_; }

 private:
  std::size_t cell_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorCategory::domain, what) {}
};

// Newton moment correction did not reach tolerance.
class CorrectionFailureError : public Error {
 public:
  CorrectionFailureError(double residual, const std::string& what)
      : Error(ErrorCategory::correction_failure, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what)
      : Error(ErrorCategory::precondition, what) {}
};

}  // namespace kfks
