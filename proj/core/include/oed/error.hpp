#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace oed {

enum class ErrorCode {
  AllZeroWeights,
  SupportMismatch,
  NonBinaryResponse,
  NonFactorizableResponse,
  AllZeroLikelihood,
  EmptyResponseSpace,
  ResponseOutsideSpace,
  LengthMismatch,
  UnsupportedModelCount,
  DegenerateEvidence,
  InvalidBundledStructure,
  InvalidArgument,
  SupportTooLarge,
};

std::string_view errorCodeName(ErrorCode code) noexcept;

// Every failure raised by the library carries a machine-readable code so that
// batch drivers can decide whether to abort or to record the row and continue.
class OedError : public std::runtime_error {
 public:
  OedError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace oed
