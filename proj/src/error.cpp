#include "divpath/error.hpp"

namespace divpath {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "parse";
    case ErrorCode::NonManifold: return "non-manifold";
    case ErrorCode::Degenerate: return "degenerate";
    case ErrorCode::Disconnected: return "disconnected";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::InvalidTarget: return "invalid-target";
    case ErrorCode::Factorization: return "factorization";
    case ErrorCode::TooLarge: return "too-large";
    case ErrorCode::DivisionDomain: return "division-domain";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

}  // namespace divpath
