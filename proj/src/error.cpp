#include "d4/error.hpp"

namespace d4 {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    case ErrorCode::IncompatibleSize: return "IncompatibleSize";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::BadEndpoints: return "BadEndpoints";
    case ErrorCode::DanglingAnyon: return "DanglingAnyon";
    case ErrorCode::RegisterOverflow: return "RegisterOverflow";
    case ErrorCode::MemoryLimit: return "MemoryLimit";
    case ErrorCode::InvalidCondition: return "InvalidCondition";
    case ErrorCode::UnknownQubit: return "UnknownQubit";
    case ErrorCode::NonUnitaryInstruction: return "NonUnitaryInstruction";
    case ErrorCode::HeraldedDiscard: return "HeraldedDiscard";
    case ErrorCode::NonIntegerMultiplicity: return "NonIntegerMultiplicity";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ConstraintViolation: return "ConstraintViolation";
    case ErrorCode::ZeroNormState: return "ZeroNormState";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::SupportTooLarge: return "SupportTooLarge";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) {
  switch (code) {
    case ErrorCode::RegisterOverflow:
    case ErrorCode::MemoryLimit:
    case ErrorCode::SupportTooLarge:
    case ErrorCode::ZeroNormState:
      return ErrorClass::Resource;
    case ErrorCode::ConstraintViolation:
    case ErrorCode::NonIntegerMultiplicity:
    case ErrorCode::Internal:
      return ErrorClass::Internal;
    default:
      return ErrorClass::Usage;
  }
}

}  // namespace d4
