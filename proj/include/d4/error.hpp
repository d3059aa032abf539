#pragma once

#include <stdexcept>
#include <string>

namespace d4 {

enum class ErrorCode {
  SizeTooSmall,
  IncompatibleSize,
  NoPath,
  IndexOutOfRange,
  BadEndpoints,
  DanglingAnyon,
  RegisterOverflow,
  MemoryLimit,
  InvalidCondition,
  UnknownQubit,
  NonUnitaryInstruction,
  HeraldedDiscard,
  NonIntegerMultiplicity,
  DimensionMismatch,
  ConstraintViolation,
  ZeroNormState,
  OutOfRange,
  SupportTooLarge,
  InvalidArgument,
  Internal,
};

const char* error_name(ErrorCode code);

enum class ErrorClass { Usage, Resource, Internal };
ErrorClass error_class(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace d4
