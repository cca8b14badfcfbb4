#include "freelevy/error.hpp"

namespace freelevy {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kFlavorMismatch: return "FlavorMismatch";
    case ErrorCode::kDivergentIntegral: return "DivergentIntegral";
    case ErrorCode::kNotRepresentable: return "NotRepresentable";
    case ErrorCode::kQuadratureBudget: return "QuadratureBudget";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kOrderTooLarge: return "OrderTooLarge";
    case ErrorCode::kOutOfCarrier: return "OutOfCarrier";
    case ErrorCode::kNotInvertible: return "NotInvertible";
    case ErrorCode::kZeroLaw: return "ZeroLaw";
    case ErrorCode::kNotIntegrable: return "NotIntegrable";
    case ErrorCode::kMissingMoments: return "MissingMoments";
    case ErrorCode::kNegativeLawInPositiveMode: return "NegativeLawInPositiveMode";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kSizeMismatch: return "SizeMismatch";
  }
  return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoConvergence:
    case ErrorCode::kQuadratureBudget:
    case ErrorCode::kDivergentIntegral:
    case ErrorCode::kNotRepresentable:
    case ErrorCode::kNotIntegrable:
      return true;
    default:
      return false;
  }
}

}  // namespace freelevy
