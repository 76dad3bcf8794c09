#include "vlac/error.hpp"

namespace vlac {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kInsufficientRows: return "InsufficientRows";
    case ErrorCode::kDTooLarge: return "DTooLarge";
    case ErrorCode::kEmptyGof: return "EmptyGof";
    case ErrorCode::kUntrainedModel: return "UntrainedModel";
    case ErrorCode::kEmptyVideo: return "EmptyVideo";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kVideoTooShort: return "VideoTooShort";
    case ErrorCode::kEmptyStore: return "EmptyStore";
    case ErrorCode::kEmptyResults: return "EmptyResults";
    case ErrorCode::kNoRelevant: return "NoRelevant";
    case ErrorCode::kNumericFailure: return "NumericFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace vlac
