#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "psdbg/interp/interpreter.hpp"
#include "psdbg/logic/parser.hpp"

namespace psdbg::debugger {

using calculus::NodeId;

/// An immutable interpreter state with its content hash.
struct Snapshot {
  std::size_t id = 0;
  std::shared_ptr<const interp::ProofScriptState> state;
  std::string digest;
};

struct TraceEntry {
  std::size_t index = 0;
  kps::StatementId stmtId;
  kps::SourceSpan span;
  Snapshot before;
  Snapshot after;
  interp::StepKind kind = interp::StepKind::Atomic;
  std::optional<NodeId> producedSubtreeRoot;
  /// Frame depth of `before`.
  std::size_t depth = 0;
};

struct Breakpoint {
  int id = 0;
  int line = 0;
  std::optional<std::string> conditionText;
  std::optional<kps::Expr> condition;
  bool enabled = true;
};

enum class Mode { Paused, Running, Finished, Interactive };

std::string toString(Mode mode);

struct InteractiveRecord {
  NodeId goal = 0;
  std::string command;
};

struct SessionOptions {
  std::string entry;
  interp::InterpreterOptions interpreter;
};

/// One debugging session over a problem and a script. Operations are not
/// thread-safe; callers serialize access.
class DebugSession {
 public:
  DebugSession(logic::Problem problem, std::string scriptText, SessionOptions options = {});

  const interp::ProofScriptState& state() const { return *current_.state; }
  const Snapshot& current() const { return current_; }
  const Snapshot& initial() const { return initial_; }
  const std::string& digest() const { return current_.digest; }
  Mode mode() const { return mode_; }
  const logic::Problem& problem() const { return problem_; }
  const std::string& scriptText() const { return state().file->sourceText; }
  const interp::Interpreter& interpreter() const { return interp_; }

  const std::vector<TraceEntry>& trace() const { return trace_; }
  /// Undone entries kept for redo, next one first.
  const std::vector<TraceEntry>& redo() const { return redo_; }

  // Outcome of the last step/continue.
  const std::optional<Error>& lastError() const { return lastError_; }
  const std::optional<std::string>& lastWarning() const { return lastWarning_; }
  std::optional<int> hitBreakpoint() const { return hitBreakpoint_; }
  std::optional<NodeId> lastStrategyRoot() const { return lastStrategyRoot_; }

  void stepOver();
  void stepInto();
  void stepBack();
  void stepIntoReverse();
  void continueRun();

  int setBreakpoint(int line, std::optional<std::string> condition = std::nullopt);
  void removeBreakpoint(int id);
  void setBreakpointEnabled(int id, bool enabled);
  const std::vector<Breakpoint>& breakpoints() const { return breakpoints_; }

  void startInteractive(NodeId goal);
  /// `command` is one kps command such as `andLeft occ="ante:0"`.
  void applyInteractive(NodeId goal, const std::string& command);
  void applyInteractive(NodeId goal, const std::string& rule, const std::optional<logic::FormulaPosition>& position,
                        const std::vector<std::pair<std::string, std::string>>& args = {});
  /// Appends the recorded commands as a cases block to the entry script and
  /// returns the appended text.
  std::string finishInteractive();
  void cancelInteractive();
  const std::vector<InteractiveRecord>& recordedInteractive() const { return recorded_; }
  /// True when the last finish could not separate some goal from its
  /// siblings and used an exact full-sequent pattern instead.
  bool usedFallbackPattern() const { return usedFallback_; }

  Snapshot stateAt(long long index) const;

 private:
  Snapshot makeSnapshot(interp::ProofScriptState state);
  bool forwardOne();
  void requireRunnable() const;
  void resetOutcome();
  void updateMode();
  std::optional<int> breakpointAt(const interp::ProofScriptState& s);

  logic::Problem problem_;
  interp::Interpreter interp_;
  Snapshot initial_;
  Snapshot current_;
  std::vector<TraceEntry> trace_;
  std::vector<TraceEntry> redo_;
  std::vector<Breakpoint> breakpoints_;
  int nextBreakpointId_ = 1;
  std::size_t nextSnapshotId_ = 0;
  Mode mode_ = Mode::Paused;

  std::optional<Error> lastError_;
  std::optional<std::string> lastWarning_;
  std::optional<int> hitBreakpoint_;
  std::optional<NodeId> lastStrategyRoot_;

  std::optional<Snapshot> interactiveBase_;
  std::vector<InteractiveRecord> recorded_;
  bool usedFallback_ = false;
};

/// JSON array of {index, stmtId, span, kind, digestBefore, digestAfter,
/// openGoalsAfter}.
std::string exportTrace(const std::vector<TraceEntry>& trace);

}  // namespace psdbg::debugger
