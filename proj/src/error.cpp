#include "rsdeig/error.hpp"

#include <string>

namespace rsdeig {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSpd: return "NotSpd";
    case ErrorCode::NotSpdInLowPrecision: return "NotSpdInLowPrecision";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::BreakdownNonSpd: return "BreakdownNonSpd";
    case ErrorCode::InnerProductNotPositive: return "InnerProductNotPositive";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NotTangent: return "NotTangent";
    case ErrorCode::AntipodalOrEqual: return "AntipodalOrEqual";
    case ErrorCode::InvalidMeshWidth: return "InvalidMeshWidth";
    case ErrorCode::MisalignedOverlap: return "MisalignedOverlap";
    case ErrorCode::EmptySubdomain: return "EmptySubdomain";
    case ErrorCode::DegenerateSmallestEigenvalue: return "DegenerateSmallestEigenvalue";
    case ErrorCode::StepCapViolated: return "StepCapViolated";
    case ErrorCode::OutsideBasin: return "OutsideBasin";
    case ErrorCode::ZeroGradientAtNonEigenvector: return "ZeroGradientAtNonEigenvector";
    case ErrorCode::InvalidC: return "InvalidC";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownTable: return "UnknownTable";
    case ErrorCode::PropertyViolation: return "PropertyViolation";
  }
  return "Unknown";
}

NotSpdError::NotSpdError(ErrorCode code, std::size_t pivot, double value)
    : Error(code, "non-positive pivot " + std::to_string(value) + " at index " + std::to_string(pivot)),
      pivot_(pivot),
      value_(value) {}

}  // namespace rsdeig
