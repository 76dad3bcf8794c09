#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vlac {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyInput,
  kDimensionMismatch,
  kKTooLarge,
  kInsufficientRows,
  kDTooLarge,
  kEmptyGof,
  kUntrainedModel,
  kEmptyVideo,
  kBadMagic,
  kTruncatedFile,
  kMalformedFile,
  kVideoTooShort,
  kEmptyStore,
  kEmptyResults,
  kNoRelevant,
  kNumericFailure,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vlac
