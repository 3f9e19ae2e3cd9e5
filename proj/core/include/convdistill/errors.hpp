#pragma once

#include <stdexcept>
#include <string>

namespace convdistill {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NonFinite,
  DivisionNearZero,
  EmptyInput,
  NotReal,
  UnknownFeature,
  SegmentationMismatch,
  UnsupportedSegmentation,
  Parse,
  Format,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type used throughout the library. The code is stable and is what
/// callers (and the CLI exit-code mapping) should dispatch on.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace convdistill
