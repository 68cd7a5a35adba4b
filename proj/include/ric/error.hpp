#pragma once

#include <stdexcept>
#include <string>

namespace ric {

enum class ErrorCode {
  ZeroLengthSegment,
  DuplicateId,
  CollinearOverlap,
  DegenerateInput,
  OutOfBounds,
  DuplicateSegment,
  DegenerateQuery,
  TooManyPaths,
  TooLarge,
  DuplicateSite,
  DegeneratePosition,
  CollinearBase,
  RebuildLimitExceeded,
  Parse,
  InvalidArgument,
};

const char* to_string(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ric
