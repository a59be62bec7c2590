#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mfcoop {

enum class ErrorCode {
  kNonFinite,
  kInvalidGrid,
  kGridMismatch,
  kOutOfRange,
  kSingularRiccati,
  kSingularSystem,
  kUnsupportedForm,
  kNoConvergence,
  kInvalidSchedule,
  kEmptyRange,
  kConfig,
  kIo,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library. The code is stable and is what the
/// CLI and the Python bindings dispatch on; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// True for the failures that mean "this parameter point has no (unique)
/// solution" as opposed to a programming or input error.
bool is_solver_failure(ErrorCode code);

}  // namespace mfcoop
