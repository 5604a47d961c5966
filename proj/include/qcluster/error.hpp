#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcluster {

// Every failure mode of the library. The numeric values double as CLI exit
// codes, so they must stay distinct and stable.
enum class ErrorCode : int {
  InvalidParameter = 2,
  NotSupported = 3,
  NonIntegralEvaluation = 4,
  NotAPowerSeriesInQr = 5,
  DivisionFailed = 6,
  IndexOutOfRange = 7,
  AmbiguousGreenLabel = 8,
  ExhaustivenessViolation = 9,
  BudgetExceeded = 10,
  ExtractionFailed = 11,
  ConstructionFailed = 12,
  VerificationFailed = 13,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotSupported: return "NotSupported";
    case ErrorCode::NonIntegralEvaluation: return "NonIntegralEvaluation";
    case ErrorCode::NotAPowerSeriesInQr: return "NotAPowerSeriesInQr";
    case ErrorCode::DivisionFailed: return "DivisionFailed";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::AmbiguousGreenLabel: return "AmbiguousGreenLabel";
    case ErrorCode::ExhaustivenessViolation: return "ExhaustivenessViolation";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ExtractionFailed: return "ExtractionFailed";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::VerificationFailed: return "VerificationFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace qcluster
