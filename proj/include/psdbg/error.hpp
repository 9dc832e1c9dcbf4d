#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace psdbg {

struct SourceLocation {
  int line = 0;
  int column = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

/// Machine-readable error kinds. The names double as the error codes of
/// the debug protocol, so keep them stable.
enum class ErrorCode {
  SyntaxError,
  UndeclaredSymbol,
  DuplicateSymbol,
  ArityMismatch,
  FreeVariable,
  InvalidPosition,
  NotApplicable,
  NotALeaf,
  GoalAlreadyClosed,
  MissingArgument,
  NoSuchQuantifier,
  AmbiguousQuantifier,
  NoDistinguishingPattern,
  UnknownScript,
  UnknownCommand,
  MissingParameter,
  NoSelectedGoal,
  NoOpenGoals,
  MultipleGoalsNoSelector,
  HandlerError,
  TypeError,
  UndefinedVariable,
  RangeError,
  Finished,
  AtStartOfTrace,
  InvalidLine,
  UnknownBreakpoint,
  IndexOutOfRange,
  InvalidMode,
  UnknownSession,
  InvalidRequest,
  UnknownMethod,
  IoError,
};

std::string_view toString(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<SourceLocation> location = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  const std::optional<SourceLocation>& location() const noexcept { return location_; }
  /// Message without the code/location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
  std::optional<SourceLocation> location_;
};

}  // namespace psdbg
