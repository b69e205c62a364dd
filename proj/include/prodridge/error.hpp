#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace prodridge {

enum class ErrorCode {
  DimensionMismatch,
  InvalidPoint,
  NotTangent,
  InvalidArgument,
  Overflow,
  DegenerateWeights,
  DensityUnderflow,
  ZeroNorm,
  RadialLeakage,
  EmptyResult,
  DegenerateSample,
  ZeroVariance,
  MetricMismatch,
  MalformedInput,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Base exception for every failure raised by the library. The code is
/// stable and is what the CLI writes into its machine-readable error record.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace prodridge
