#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "psdbg/calculus/proof_tree.hpp"
#include "psdbg/interp/value.hpp"
#include "psdbg/kps/ast.hpp"
#include "psdbg/logic/signature.hpp"

namespace psdbg::interp {

using calculus::NodeId;

struct Goal {
  NodeId node = 0;
  Env env;
};

enum class Phase { Enter, Exit };

/// The next statement boundary: entering a statement, or leaving a
/// compound one.
struct ProgramCounter {
  kps::StatementId stmt;
  Phase phase = Phase::Enter;

  friend bool operator==(const ProgramCounter&, const ProgramCounter&) = default;
};

struct Frame {
  enum class Kind { Root, Foreach, TheOnly, Cases, Call };

  Kind kind = Kind::Root;
  /// The statement that opened the frame; invalid for the root.
  kps::StatementId owner;
  /// Statements being run, or null before the first iteration.
  const kps::Block* block = nullptr;
  /// Which block of the owner: -1 body, k case k, cases.size() default.
  int blockTag = -1;
  std::size_t index = 0;
  /// Remaining (goal, case) iterations of a foreach or cases.
  std::vector<std::pair<NodeId, int>> worklist;
  /// Selectors see only open goals below this node.
  NodeId scopeRoot = 0;

  friend bool operator==(const Frame&, const Frame&) = default;
};

struct InterpreterOptions {
  std::int64_t maxSteps = 1000;
  std::int64_t instLimit = 2;
};

struct ProofScriptState {
  std::shared_ptr<const kps::ScriptFile> file;
  std::string entry;
  calculus::ProofTree tree;
  /// Goal-local variables, keyed by open leaf.
  std::map<NodeId, Env> envs;
  std::optional<NodeId> selected;
  std::vector<Frame> frames;
  ProgramCounter pc;
  bool finished = false;
  InterpreterOptions options;

  /// Open goals in node-id order.
  std::vector<Goal> goals() const;
  std::size_t openGoalCount() const { return envs.size(); }
  const kps::Statement* currentStatement() const;
  /// Default values of the `prover.*` variables.
  Env proverDefaults() const;
};

/// Canonical text of the whole state; equal text means equal states.
std::string serialize(const ProofScriptState& state);
/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a(std::string_view text);
std::string digest(const ProofScriptState& state);

struct CommandContext {
  calculus::ProofTree& tree;
  NodeId goal;
  const Env& args;
  const Env& env;
  std::int64_t maxSteps;
  std::int64_t instLimit;
};

struct CommandOutcome {
  bool strategy = false;
  std::optional<NodeId> subtreeRoot;
};

/// A goal mutator. Handlers get evaluated arguments and may change only
/// the subtree below the goal.
struct CommandHandler {
  std::string name;
  std::vector<std::string> requiredArgs;
  std::function<CommandOutcome(CommandContext&)> apply;
};

class CommandRegistry {
 public:
  /// Every calculus rule plus auto, tryclose, simplify and instantiate.
  static CommandRegistry standard();

  void add(CommandHandler handler);
  const CommandHandler* find(std::string_view name) const;
  std::set<std::string, std::less<>> names() const;

 private:
  std::map<std::string, CommandHandler, std::less<>> handlers_;
};

enum class StepKind { Atomic, CompoundEnter, CompoundExit, Strategy };

std::string toString(StepKind kind);

/// What one executeStatement transition did.
struct StepInfo {
  ProgramCounter pc;
  StepKind kind = StepKind::Atomic;
  std::optional<NodeId> goal;
  std::optional<NodeId> producedSubtreeRoot;
};

class Interpreter {
 public:
  explicit Interpreter(CommandRegistry registry = CommandRegistry::standard(), InterpreterOptions options = {});

  const CommandRegistry& registry() const { return registry_; }
  const InterpreterOptions& options() const { return options_; }

  /// Empty `entry` selects the first script.
  ProofScriptState initState(const logic::Problem& problem, std::shared_ptr<const kps::ScriptFile> file,
                             const std::string& entry = "") const;

  /// One statement-boundary transition. Throws on runtime errors and
  /// leaves `state` untouched.
  ProofScriptState executeStatement(const ProofScriptState& state, StepInfo* info = nullptr) const;

  /// Transitions until finished; errors propagate.
  ProofScriptState runToEnd(ProofScriptState state) const;

  /// Runs one command statement on `goal` outside of the script flow, with
  /// the goal's environment. Used by interactive mode.
  ProofScriptState applyCommand(const ProofScriptState& state, NodeId goal, const kps::Statement& command,
                                StepInfo* info = nullptr) const;

  /// Moves `state` onto `file`, which must keep every statement id of the
  /// old file (an appended statement is fine). A finished state resumes
  /// if the entry script grew.
  ProofScriptState rebind(const ProofScriptState& state, std::shared_ptr<const kps::ScriptFile> file) const;

  EvalContext evalContext(const ProofScriptState& state, const Env* env, const Env* defaults) const;

 private:
  void normalize(ProofScriptState& s) const;
  NodeId requireGoal(ProofScriptState& s) const;
  void runCommand(ProofScriptState& s, NodeId goal, const kps::Statement& stmt, StepInfo& info) const;
  void enterCompound(ProofScriptState& s, const kps::Statement& stmt, StepInfo& info) const;

  CommandRegistry registry_;
  InterpreterOptions options_;
};

/// Open leaves below `root` in node-id order.
std::vector<NodeId> openGoalsUnder(const calculus::ProofTree& tree, NodeId root);

}  // namespace psdbg::interp
