#include "mfcoop/error.hpp"

namespace mfcoop {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonFinite: return "NonFinite";
    case ErrorCode::kInvalidGrid: return "InvalidGrid";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kSingularRiccati: return "SingularRiccati";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kUnsupportedForm: return "UnsupportedForm";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kInvalidSchedule: return "InvalidSchedule";
    case ErrorCode::kEmptyRange: return "EmptyRange";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

bool is_solver_failure(ErrorCode code) {
  switch (code) {
    case ErrorCode::kSingularRiccati:
    case ErrorCode::kSingularSystem:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kUnsupportedForm:
      return true;
    default:
      return false;
  }
}

}  // namespace mfcoop
