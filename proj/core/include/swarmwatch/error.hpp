#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace swarmwatch {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidBox,
  kDegenerateInput,
  kInvalidMatrix,
  kTooLarge,
  kCountMismatch,
  kOutOfRange,
  kTooMany,
  kMalformed,
  kNonFiniteLoss,
  kShapeMismatch,
  kEmptyBuffer,
  kIo,
  kConfig,
  kScoutTimeout,
  kRegistrationFailed,
  kAssignmentFailed,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure surfaced by the library. The code identifies the failure class,
/// the message carries context (offending index, pair, line number).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace swarmwatch
