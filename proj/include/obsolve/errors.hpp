#pragma once

#include <stdexcept>
#include <string>

namespace obsolve {

enum class ErrorCode {
  DimensionMismatch,
  NotSquare,
  NonFiniteEntry,
  SingularMatrix,
  ZeroMatrix,
  SigmaOutOfRange,
  PropertyPViolated,
  NoCertificate,
  NonFinite,
  ZeroTransfer,
  IllConditioned,
  InvalidArgument,
  Parse,
  Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the core library. The code is what the C API
/// forwards; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace obsolve
