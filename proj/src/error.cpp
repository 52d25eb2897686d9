#include "dxeval/error.hpp"

namespace dxeval {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::MalformedValue: return "MalformedValue";
    case ErrorCode::DuplicateCaseId: return "DuplicateCaseId";
    case ErrorCode::EmptyCohort: return "EmptyCohort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingFeature: return "MissingFeature";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::LeakageDetected: return "LeakageDetected";
    case ErrorCode::InvalidReplicateCount: return "InvalidReplicateCount";
    case ErrorCode::InvalidBinCount: return "InvalidBinCount";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::NoPositives: return "NoPositives";
    case ErrorCode::DegenerateClassSize: return "DegenerateClassSize";
    case ErrorCode::ZeroDenominator: return "ZeroDenominator";
    case ErrorCode::Separation: return "Separation";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::AllUndefined: return "AllUndefined";
    case ErrorCode::AllBinsEmpty: return "AllBinsEmpty";
    case ErrorCode::ZeroVariance: return "ZeroVariance";
    case ErrorCode::TooManyDegenerateReplicates: return "TooManyDegenerateReplicates";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MissingColumn:
    case ErrorCode::MalformedValue:
    case ErrorCode::DuplicateCaseId:
    case ErrorCode::EmptyCohort:
    case ErrorCode::LengthMismatch:
    case ErrorCode::MissingFeature:
    case ErrorCode::OutOfRange:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidSpec:
    case ErrorCode::LeakageDetected:
    case ErrorCode::InvalidReplicateCount:
    case ErrorCode::InvalidBinCount:
    case ErrorCode::ThresholdOutOfRange:
      return ErrorCategory::Input;
    case ErrorCode::SingleClass:
    case ErrorCode::NoPositives:
    case ErrorCode::DegenerateClassSize:
    case ErrorCode::ZeroDenominator:
    case ErrorCode::Separation:
    case ErrorCode::Singular:
    case ErrorCode::NotConverged:
    case ErrorCode::AllUndefined:
    case ErrorCode::AllBinsEmpty:
    case ErrorCode::ZeroVariance:
    case ErrorCode::TooManyDegenerateReplicates:
      return ErrorCategory::Degenerate;
    case ErrorCode::Internal:
      break;
  }
  return ErrorCategory::Internal;
}

}  // namespace dxeval
