#include "convdistill/errors.hpp"

namespace convdistill {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::DivisionNearZero: return "DivisionNearZero";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NotReal: return "NotReal";
    case ErrorCode::UnknownFeature: return "UnknownFeature";
    case ErrorCode::SegmentationMismatch: return "SegmentationMismatch";
    case ErrorCode::UnsupportedSegmentation: return "UnsupportedSegmentation";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Format: return "Format";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace convdistill
