#include <hopfjet/error.hpp>

namespace hopfjet {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotAContraction:
    case ErrorKind::NotGloballyContracting:
      return 3;
    case ErrorKind::VerificationFailure:
      return 4;
    case ErrorKind::Internal:
      return 1;
    default:
      return 2;
  }
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::BasisMismatch: return "basis mismatch";
    case ErrorKind::NonVanishingConstant: return "component does not vanish at 0";
    case ErrorKind::SingularLinearPart: return "singular linear part";
    case ErrorKind::NotAContraction: return "not a contraction";
    case ErrorKind::NotGloballyContracting: return "not globally contracting on test domain";
    case ErrorKind::IllConditioned: return "ill-conditioned";
    case ErrorKind::VerificationFailure: return "verification failure";
    case ErrorKind::Precondition: return "precondition violated";
    case ErrorKind::Internal: return "internal error";
  }
  return "unknown";
}

}  // namespace hopfjet
