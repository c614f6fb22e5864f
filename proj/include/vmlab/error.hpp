#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vmlab {

enum class ErrorCode {
  NonPositiveMass,
  MassNotOne,
  TooManyAtoms,
  SpaceMismatch,
  BadExponent,
  DimensionMismatch,
  TooManyVertices,
  EmptyFamily,
  ZeroFamily,
  UnsupportedRegime,
  IndexOutOfRange,
  DualNormViolation,
  InfeasibleLP,
  DescriptorMismatch,
  FamilyNotCovered,
  TooManyLevels,
  DimensionTooLarge,
  MissingChain,
  NotNorming,
  InvalidArgument,
  IoError,
  MalformedJson,
  UnknownSubcommand,
};

std::string_view to_string(ErrorCode code);

/// Every validation failure in the library is reported through this type.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) {
    fail(code, message);
  }
}

}  // namespace vmlab
