#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace halfreg {

enum class ErrorKind {
  Malformed,
  InvalidMatrix,
  DimensionMismatch,
  NotNearRealization,
  Infeasible,
  AlreadySimple,
  SameRow,
  PreconditionViolated,
  NoNonLoopEdge,
  InvalidTrail,
  NotBalanced,
  BadDefectShape,
  NotACyclicPermutation,
  DifferentInstances,
  NotReversible,
  InsufficientSamples,
  TooLarge,
  IoError,
  SchemaError,
};

std::string_view to_string(ErrorKind kind);

// Every failure raised by the library carries one of the kinds above so
// callers (tests, the CLI exit-code mapping) can dispatch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace halfreg
