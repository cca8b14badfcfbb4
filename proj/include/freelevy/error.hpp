#pragma once

#include <stdexcept>
#include <string>

namespace freelevy {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kFlavorMismatch,
  kDivergentIntegral,
  kNotRepresentable,
  kQuadratureBudget,
  kDomainError,
  kNoConvergence,
  kOrderTooLarge,
  kOutOfCarrier,
  kNotInvertible,
  kZeroLaw,
  kNotIntegrable,
  kMissingMoments,
  kNegativeLawInPositiveMode,
  kNotHermitian,
  kSizeMismatch,
};

const char* to_string(ErrorCode code);

// Numeric failures (as opposed to bad input) map to CLI exit status 3.
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, double residual = 0.0)
      : std::runtime_error(message), code_(code), residual_(residual) {}

  ErrorCode code() const noexcept { return code_; }
  // Diagnostic residual for NoConvergence / QuadratureBudget, 0 otherwise.
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message,
                              double residual = 0.0) {
  throw Error(code, message, residual);
}

}  // namespace freelevy
