#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dxeval {

enum class ErrorCode {
  // input problems
  MissingColumn,
  MalformedValue,
  DuplicateCaseId,
  EmptyCohort,
  LengthMismatch,
  MissingFeature,
  OutOfRange,
  InvalidArgument,
  InvalidSpec,
  LeakageDetected,
  InvalidReplicateCount,
  InvalidBinCount,
  ThresholdOutOfRange,
  // statistical degeneracy
  SingleClass,
  NoPositives,
  DegenerateClassSize,
  ZeroDenominator,
  Separation,
  Singular,
  NotConverged,
  AllUndefined,
  AllBinsEmpty,
  ZeroVariance,
  TooManyDegenerateReplicates,
  // everything else
  Internal,
};

/// Broad failure classes; the CLI maps these onto exit codes 2, 3 and 4.
enum class ErrorCategory { Input, Degenerate, Internal };

std::string_view to_string(ErrorCode code) noexcept;
ErrorCategory category_of(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
  std::string detail_;
};

/// Re-throws `e` with a pipeline stage prefix, keeping its code.
[[noreturn]] inline void rethrow_in_stage(const Error& e, std::string_view stage) {
  throw Error(e.code(), std::string(stage) + ": " + e.detail());
}

}  // namespace dxeval
