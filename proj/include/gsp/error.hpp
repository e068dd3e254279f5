#pragma once

#include <stdexcept>
#include <string>

namespace gsp {

enum class ErrorKind {
  invalid_argument,
  shape_mismatch,
  singular_series,
  domain,
  numeric_failure,
  cutoff_overflow,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base exception for every failure raised by the library. The kind decides
/// how the CLI maps the failure onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures caused by bad user input rather than by the numerics.
  bool is_input_error() const noexcept {
    return kind_ == ErrorKind::invalid_argument || kind_ == ErrorKind::shape_mismatch;
  }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

/// Throws numeric_failure when `value` is not finite.
double require_finite(double value, const char* context);

}  // namespace gsp
