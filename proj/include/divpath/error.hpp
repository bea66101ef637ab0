#pragma once

#include <stdexcept>
#include <string>

namespace divpath {

enum class ErrorCode {
  Parse,
  NonManifold,
  Degenerate,
  Disconnected,
  InvalidArgument,
  InvalidTarget,
  Factorization,
  TooLarge,
  DivisionDomain,
  Io,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a code so front ends can map
/// it onto exit statuses without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace divpath
