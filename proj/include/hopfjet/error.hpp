#pragma once

#include <stdexcept>
#include <string>

namespace hopfjet {

enum class ErrorKind {
  InvalidInput,
  BasisMismatch,
  NonVanishingConstant,
  SingularLinearPart,
  NotAContraction,
  NotGloballyContracting,
  IllConditioned,
  VerificationFailure,
  Precondition,
  Internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code used by the command-line front end for an error kind.
int exit_code_for(ErrorKind kind) noexcept;

const char* to_string(ErrorKind kind) noexcept;

}  // namespace hopfjet
