#pragma once

#include <stdexcept>
#include <string>

namespace hrc {

enum class ErrorKind {
  MissingGoal,
  StepTooLarge,
  DegenerateBelief,
  EmptySupport,
  MalformedSequence,
  NoTasks,
  TooLarge,
  WrongPolicy,
  EmptyRemaining,
  PackingFailure,
  NonTermination,
  NotApplicable,
  InvalidInput,
  Io,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers can map it
// onto exit codes or protocol errors without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hrc
