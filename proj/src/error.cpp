#include "vmlab/error.hpp"

namespace vmlab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::MassNotOne: return "MassNotOne";
    case ErrorCode::TooManyAtoms: return "TooManyAtoms";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::BadExponent: return "BadExponent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::TooManyVertices: return "TooManyVertices";
    case ErrorCode::EmptyFamily: return "EmptyFamily";
    case ErrorCode::ZeroFamily: return "ZeroFamily";
    case ErrorCode::UnsupportedRegime: return "UnsupportedRegime";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::DualNormViolation: return "DualNormViolation";
    case ErrorCode::InfeasibleLP: return "InfeasibleLP";
    case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::FamilyNotCovered: return "FamilyNotCovered";
    case ErrorCode::TooManyLevels: return "TooManyLevels";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::MissingChain: return "MissingChain";
    case ErrorCode::NotNorming: return "NotNorming";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::UnknownSubcommand: return "UnknownSubcommand";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace vmlab
