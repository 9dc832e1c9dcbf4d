#include "psdbg/error.hpp"

namespace psdbg {

std::string_view toString(ErrorCode code) {
  switch (code) {
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::UndeclaredSymbol: return "UndeclaredSymbol";
    case ErrorCode::DuplicateSymbol: return "DuplicateSymbol";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::FreeVariable: return "FreeVariable";
    case ErrorCode::InvalidPosition: return "InvalidPosition";
    case ErrorCode::NotApplicable: return "NotApplicable";
    case ErrorCode::NotALeaf: return "NotALeaf";
    case ErrorCode::GoalAlreadyClosed: return "GoalAlreadyClosed";
    case ErrorCode::MissingArgument: return "MissingArgument";
    case ErrorCode::NoSuchQuantifier: return "NoSuchQuantifier";
    case ErrorCode::AmbiguousQuantifier: return "AmbiguousQuantifier";
    case ErrorCode::NoDistinguishingPattern: return "NoDistinguishingPattern";
    case ErrorCode::UnknownScript: return "UnknownScript";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::MissingParameter: return "MissingParameter";
    case ErrorCode::NoSelectedGoal: return "NoSelectedGoal";
    case ErrorCode::NoOpenGoals: return "NoOpenGoals";
    case ErrorCode::MultipleGoalsNoSelector: return "MultipleGoalsNoSelector";
    case ErrorCode::HandlerError: return "HandlerError";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::UndefinedVariable: return "UndefinedVariable";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::Finished: return "Finished";
    case ErrorCode::AtStartOfTrace: return "AtStartOfTrace";
    case ErrorCode::InvalidLine: return "InvalidLine";
    case ErrorCode::UnknownBreakpoint: return "UnknownBreakpoint";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InvalidMode: return "InvalidMode";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::InvalidRequest: return "InvalidRequest";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string render(ErrorCode code, const std::string& message,
                   const std::optional<SourceLocation>& location) {
  std::string out(toString(code));
  if (location) {
    out += " at " + std::to_string(location->line) + ":" + std::to_string(location->column);
  }
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string& message, std::optional<SourceLocation> location)
    : std::runtime_error(render(code, message, location)),
      code_(code),
      message_(message),
      location_(location) {}

}  // namespace psdbg
