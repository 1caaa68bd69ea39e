#include "obsolve/errors.hpp"

namespace obsolve {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::PropertyPViolated: return "PropertyPViolated";
    case ErrorCode::NoCertificate: return "NoCertificate";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::ZeroTransfer: return "ZeroTransfer";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace obsolve
