#include "prodridge/error.hpp"

namespace prodridge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "dimension_mismatch";
    case ErrorCode::InvalidPoint: return "invalid_point";
    case ErrorCode::NotTangent: return "not_tangent";
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::DegenerateWeights: return "degenerate_weights";
    case ErrorCode::DensityUnderflow: return "density_underflow";
    case ErrorCode::ZeroNorm: return "zero_norm";
    case ErrorCode::RadialLeakage: return "radial_leakage";
    case ErrorCode::EmptyResult: return "empty_result";
    case ErrorCode::DegenerateSample: return "degenerate_sample";
    case ErrorCode::ZeroVariance: return "zero_variance";
    case ErrorCode::MetricMismatch: return "metric_mismatch";
    case ErrorCode::MalformedInput: return "malformed_input";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace prodridge
