#include "psdbg/debugger/session.hpp"

#include <algorithm>

#include <json.hpp>

#include "psdbg/matcher/matcher.hpp"

namespace psdbg::debugger {

namespace {

using interp::ProofScriptState;

std::shared_ptr<const kps::ScriptFile> parseFile(const std::string& text) {
  return std::make_shared<const kps::ScriptFile>(kps::parseScript(text));
}

/// Child-index path from `ancestor` down to `node`.
std::vector<std::size_t> pathFrom(const calculus::ProofTree& tree, NodeId ancestor, NodeId node) {
  std::vector<std::size_t> path;
  while (node != ancestor) {
    NodeId parent = *tree.node(node).parent;
    const auto& kids = tree.node(parent).children;
    path.push_back(std::find(kids.begin(), kids.end(), node) - kids.begin());
    node = parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

NodeId follow(const calculus::ProofTree& tree, NodeId from, const std::vector<std::size_t>& path) {
  for (std::size_t k : path) from = tree.node(from).children.at(k);
  return from;
}

/// The goal a command would act on inside a frame scoped at `scope`.
std::optional<NodeId> chosenGoal(const ProofScriptState& s, NodeId scope, std::optional<NodeId> selected) {
  if (selected && s.tree.isOpenLeaf(*selected) && s.tree.isAncestorOrSelf(scope, *selected)) return selected;
  auto open = interp::openGoalsUnder(s.tree, scope);
  if (open.size() == 1) return open.front();
  return std::nullopt;
}

std::string casePattern(const ProofScriptState& s, NodeId target, const std::vector<NodeId>& others, bool* exact) {
  std::vector<logic::Sequent> siblings;
  for (NodeId o : others)
    if (o != target) siblings.push_back(s.tree.node(o).sequent);
  const logic::Sequent& seq = s.tree.node(target).sequent;
  try {
    if (exact) *exact = false;
    return matcher::toString(matcher::generateCasePattern(seq, siblings));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoDistinguishingPattern) throw;
    if (exact) *exact = true;
    return matcher::toString(matcher::exactPattern(seq.antecedent, seq.succedent));
  }
}

std::string indent(int level) { return std::string(2 * level, ' '); }

kps::ScriptFile parseCommand(const std::string& command) {
  std::string text = command;
  while (!text.empty() && (text.back() == ';' || std::isspace(static_cast<unsigned char>(text.back()))))
    text.pop_back();
  kps::ScriptFile f;
  try {
    f = kps::parseScript("script interactive() {\n" + text + ";\n}");
  } catch (const Error& e) {
    throw Error(e.code(), e.message());
  }
  const kps::Block& body = f.scripts.front().body;
  if (body.size() != 1 || body.front().kind != kps::Statement::Kind::Command) {
    throw Error(ErrorCode::SyntaxError, "expected a single command, got '" + command + "'");
  }
  return f;
}

}  // namespace

std::string toString(Mode mode) {
  switch (mode) {
    case Mode::Paused: return "paused";
    case Mode::Running: return "running";
    case Mode::Finished: return "finished";
    case Mode::Interactive: return "interactive";
  }
  return "?";
}

DebugSession::DebugSession(logic::Problem problem, std::string scriptText, SessionOptions options)
    : problem_(std::move(problem)), interp_(interp::CommandRegistry::standard(), options.interpreter) {
  initial_ = makeSnapshot(interp_.initState(problem_, parseFile(scriptText), options.entry));
  current_ = initial_;
  updateMode();
}

Snapshot DebugSession::makeSnapshot(ProofScriptState state) {
  Snapshot s;
  s.id = nextSnapshotId_++;
  s.digest = interp::digest(state);
  s.state = std::make_shared<const ProofScriptState>(std::move(state));
  return s;
}

void DebugSession::updateMode() {
  if (mode_ == Mode::Interactive) return;
  mode_ = state().finished ? Mode::Finished : Mode::Paused;
}

void DebugSession::resetOutcome() {
  lastError_.reset();
  lastWarning_.reset();
  hitBreakpoint_.reset();
  lastStrategyRoot_.reset();
}

void DebugSession::requireRunnable() const {
  if (mode_ == Mode::Interactive) throw Error(ErrorCode::InvalidMode, "session is in interactive mode");
  if (state().finished) throw Error(ErrorCode::Finished, "script has finished");
}

bool DebugSession::forwardOne() {
  interp::StepInfo info;
  std::optional<ProofScriptState> next;
  try {
    next = interp_.executeStatement(state(), &info);
  } catch (const Error& e) {
    lastError_ = e;
    return false;
  }
  const std::string d = interp::digest(*next);
  TraceEntry entry;
  if (!redo_.empty() && redo_.front().before.digest == current_.digest && redo_.front().after.digest == d) {
    entry = redo_.front();
    redo_.erase(redo_.begin());
  } else {
    redo_.clear();
    const kps::Statement* st = state().file->statement(info.pc.stmt);
    entry.stmtId = info.pc.stmt;
    entry.span = st ? st->span : kps::SourceSpan{};
    entry.before = current_;
    entry.after = makeSnapshot(std::move(*next));
    entry.kind = info.kind;
    entry.producedSubtreeRoot = info.producedSubtreeRoot;
    entry.depth = state().frames.size();
  }
  entry.index = trace_.size();
  lastStrategyRoot_ = entry.producedSubtreeRoot;
  current_ = entry.after;
  trace_.push_back(std::move(entry));
  updateMode();
  return true;
}

void DebugSession::stepInto() {
  requireRunnable();
  resetOutcome();
  forwardOne();
}

void DebugSession::stepOver() {
  requireRunnable();
  resetOutcome();
  const std::size_t depth = state().frames.size();
  std::optional<NodeId> strategyRoot;
  bool first = true;
  while (forwardOne()) {
    if (first) strategyRoot = lastStrategyRoot_;
    first = false;
    if (state().finished || state().frames.size() <= depth) break;
  }
  lastStrategyRoot_ = strategyRoot;
}

void DebugSession::stepIntoReverse() {
  if (mode_ == Mode::Interactive) throw Error(ErrorCode::InvalidMode, "session is in interactive mode");
  if (trace_.empty()) throw Error(ErrorCode::AtStartOfTrace, "nothing to undo");
  resetOutcome();
  redo_.insert(redo_.begin(), std::move(trace_.back()));
  trace_.pop_back();
  current_ = redo_.front().before;
  updateMode();
}

void DebugSession::stepBack() {
  if (mode_ == Mode::Interactive) throw Error(ErrorCode::InvalidMode, "session is in interactive mode");
  if (trace_.empty()) throw Error(ErrorCode::AtStartOfTrace, "nothing to undo");
  resetOutcome();
  const std::size_t depth = state().frames.size();
  std::size_t i = trace_.size() - 1;
  while (i > 0 && trace_[i].depth > depth) --i;
  redo_.insert(redo_.begin(), std::make_move_iterator(trace_.begin() + static_cast<std::ptrdiff_t>(i)),
               std::make_move_iterator(trace_.end()));
  trace_.resize(i);
  current_ = redo_.front().before;
  updateMode();
}

std::optional<int> DebugSession::breakpointAt(const ProofScriptState& s) {
  if (s.finished || s.pc.phase != interp::Phase::Enter) return std::nullopt;
  const kps::Statement* st = s.currentStatement();
  if (!st) return std::nullopt;
  for (const Breakpoint& b : breakpoints_) {
    if (!b.enabled || b.line != st->span.beginLine) continue;
    if (!b.condition) return b.id;
    const interp::Env defaults = s.proverDefaults();
    const interp::Env empty;
    const interp::Env* env = &empty;
    if (s.selected && s.envs.count(*s.selected)) env = &s.envs.at(*s.selected);
    try {
      interp::Value v = interp::evalExpr(*b.condition, interp_.evalContext(s, env, &defaults));
      const bool* truth = std::get_if<bool>(&v);
      if (!truth) {
        throw Error(ErrorCode::TypeError, "condition yields " + std::string(interp::typeName(v)) + ", not Bool");
      }
      if (*truth) return b.id;
    } catch (const Error& e) {
      lastWarning_ = "breakpoint " + std::to_string(b.id) + ": " + e.what();
      return b.id;
    }
  }
  return std::nullopt;
}

void DebugSession::continueRun() {
  requireRunnable();
  resetOutcome();
  mode_ = Mode::Running;
  bool first = true;
  while (!state().finished) {
    if (!first) {
      if (auto hit = breakpointAt(state())) {
        hitBreakpoint_ = hit;
        break;
      }
    }
    first = false;
    if (!forwardOne()) break;
  }
  mode_ = Mode::Paused;
  updateMode();
}

int DebugSession::setBreakpoint(int line, std::optional<std::string> condition) {
  const auto stmts = state().file->allStatements();
  bool covered = std::any_of(stmts.begin(), stmts.end(), [&](const kps::Statement* s) { return s->span.beginLine == line; });
  if (!covered) throw Error(ErrorCode::InvalidLine, "no statement starts on line " + std::to_string(line));
  for (const Breakpoint& b : breakpoints_) {
    if (b.line == line && b.conditionText == condition) {
      throw Error(ErrorCode::InvalidLine, "line " + std::to_string(line) + " already has breakpoint " +
                                              std::to_string(b.id) + " with the same condition");
    }
  }
  Breakpoint b;
  b.line = line;
  if (condition) {
    b.condition = kps::parseExpression(*condition);
    b.conditionText = condition;
  }
  b.id = nextBreakpointId_++;
  breakpoints_.push_back(std::move(b));
  return breakpoints_.back().id;
}

void DebugSession::removeBreakpoint(int id) {
  auto it = std::find_if(breakpoints_.begin(), breakpoints_.end(), [&](const Breakpoint& b) { return b.id == id; });
  if (it == breakpoints_.end()) throw Error(ErrorCode::UnknownBreakpoint, "no breakpoint " + std::to_string(id));
  breakpoints_.erase(it);
}

void DebugSession::setBreakpointEnabled(int id, bool enabled) {
  auto it = std::find_if(breakpoints_.begin(), breakpoints_.end(), [&](const Breakpoint& b) { return b.id == id; });
  if (it == breakpoints_.end()) throw Error(ErrorCode::UnknownBreakpoint, "no breakpoint " + std::to_string(id));
  it->enabled = enabled;
}

void DebugSession::startInteractive(NodeId goal) {
  if (mode_ == Mode::Interactive) throw Error(ErrorCode::InvalidMode, "already in interactive mode");
  if (state().openGoalCount() == 0) throw Error(ErrorCode::NoOpenGoals, "no open goals to work on");
  if (!state().tree.isOpenLeaf(goal)) throw Error(ErrorCode::NotALeaf, "node " + std::to_string(goal) + " is no open goal");
  resetOutcome();
  interactiveBase_ = current_;
  recorded_.clear();
  ProofScriptState s = state();
  s.selected = goal;
  current_ = makeSnapshot(std::move(s));
  mode_ = Mode::Interactive;
}

void DebugSession::applyInteractive(NodeId goal, const std::string& command) {
  if (mode_ != Mode::Interactive) throw Error(ErrorCode::InvalidMode, "not in interactive mode");
  const kps::ScriptFile f = parseCommand(command);
  const kps::Statement& stmt = f.scripts.front().body.front();
  const ProofScriptState& base = *interactiveBase_->state;
  const auto entryGoals = interp::openGoalsUnder(base.tree, 0);
  if (!state().tree.isOpenLeaf(goal) ||
      std::none_of(entryGoals.begin(), entryGoals.end(), [&](NodeId g) { return state().tree.isAncestorOrSelf(g, goal); })) {
    throw Error(ErrorCode::NotALeaf, "node " + std::to_string(goal) + " is no open goal");
  }
  std::optional<ProofScriptState> next;
  try {
    next = interp_.applyCommand(state(), goal, stmt);
  } catch (const Error& e) {
    throw Error(e.code(), e.message());
  }
  current_ = makeSnapshot(std::move(*next));
  std::string text = kps::prettyPrint(stmt);
  while (!text.empty() && text.back() == '\n') text.pop_back();
  recorded_.push_back({goal, text});
}

void DebugSession::applyInteractive(NodeId goal, const std::string& rule,
                                    const std::optional<logic::FormulaPosition>& position,
                                    const std::vector<std::pair<std::string, std::string>>& args) {
  std::string command = rule;
  if (position) command += " occ=\"" + logic::toString(*position) + "\"";
  for (const auto& [name, value] : args) command += " " + name + "=" + value;
  applyInteractive(goal, command);
}

void DebugSession::cancelInteractive() {
  if (mode_ != Mode::Interactive) throw Error(ErrorCode::InvalidMode, "not in interactive mode");
  current_ = *interactiveBase_;
  interactiveBase_.reset();
  recorded_.clear();
  mode_ = Mode::Paused;
  updateMode();
}

std::string DebugSession::finishInteractive() {
  if (mode_ != Mode::Interactive) throw Error(ErrorCode::InvalidMode, "not in interactive mode");
  const ProofScriptState& base = *interactiveBase_->state;
  const calculus::ProofTree& done = state().tree;
  const auto entryGoals = interp::openGoalsUnder(base.tree, 0);

  struct Case {
    std::string pattern;
    std::string body;
    bool exact = false;
  };
  std::vector<Case> cases;
  usedFallback_ = false;
  for (NodeId g : entryGoals) {
    std::vector<const InteractiveRecord*> mine;
    for (const InteractiveRecord& r : recorded_)
      if (done.isAncestorOrSelf(g, r.goal)) mine.push_back(&r);
    if (mine.empty()) continue;
    Case c;
    c.pattern = casePattern(base, g, entryGoals, &c.exact);
    usedFallback_ = usedFallback_ || c.exact;
    // Replay the commands the way the interpreter will run the case body,
    // wrapping a command in a nested cases when the default goal choice
    // would pick another goal.
    std::optional<ProofScriptState> scratchBox = base;
    ProofScriptState& scratch = *scratchBox;
    std::optional<NodeId> selected = g;
    std::optional<NodeId> nested;
    for (const InteractiveRecord* r : mine) {
      const NodeId target = follow(scratch.tree, g, pathFrom(done, g, r->goal));
      const kps::ScriptFile f = parseCommand(r->command);
      const kps::Statement& stmt = f.scripts.front().body.front();
      int level = 3;
      if (nested && chosenGoal(scratch, *nested, selected) == target) {
        level = 5;
      } else {
        if (nested) {
          c.body += indent(3) + "}\n";
          nested.reset();
          selected.reset();
        }
        if (chosenGoal(scratch, g, selected) != target) {
          bool exact = false;
          const std::string pattern = casePattern(scratch, target, interp::openGoalsUnder(scratch.tree, g), &exact);
          usedFallback_ = usedFallback_ || exact;
          c.body += indent(3) + "cases {\n" + indent(4) + "case match `" +
                    pattern + "`:\n";
          nested = target;
          selected = target;
          level = 5;
        }
      }
      c.body += indent(level) + r->command + "\n";
      scratchBox = interp_.applyCommand(scratch, target, stmt);
      selected = scratch.selected;
    }
    if (nested) c.body += indent(3) + "}\n";
    cases.push_back(std::move(c));
  }
  std::stable_partition(cases.begin(), cases.end(), [](const Case& c) { return !c.exact; });

  std::string block;
  if (!cases.empty()) {
    block = indent(1) + "cases {\n";
    for (const Case& c : cases) block += indent(2) + "case match `" + c.pattern + "`:\n" + c.body;
    block += indent(1) + "}\n";
  }

  Snapshot resume = *interactiveBase_;
  interactiveBase_.reset();
  recorded_.clear();
  mode_ = Mode::Paused;
  current_ = resume;
  if (block.empty()) {
    updateMode();
    return block;
  }

  const kps::ScriptFile& file = *base.file;
  const kps::Script* entry = file.find(base.entry);
  std::string text = file.sourceText;
  std::size_t brace = entry->span.endOffset - 1;
  std::string insert = block;
  if (brace > 0 && text[brace - 1] != '\n') insert = "\n" + insert;
  text.insert(brace, insert);

  const bool wasFinished = base.finished;
  current_ = makeSnapshot(interp_.rebind(base, parseFile(text)));
  redo_.clear();
  updateMode();
  if (wasFinished) {
    while (!state().finished && forwardOne()) {
    }
  }
  return block;
}

Snapshot DebugSession::stateAt(long long index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= trace_.size()) {
    throw Error(ErrorCode::IndexOutOfRange, "trace index " + std::to_string(index) + " out of range [0, " +
                                                std::to_string(trace_.size()) + ")");
  }
  return trace_[static_cast<std::size_t>(index)].after;
}

std::string exportTrace(const std::vector<TraceEntry>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (const TraceEntry& e : trace) {
    out.push_back({{"index", e.index},
                   {"stmtId", kps::toString(e.stmtId)},
                   {"span",
                    {{"beginLine", e.span.beginLine},
                     {"beginColumn", e.span.beginColumn},
                     {"endLine", e.span.endLine},
                     {"endColumn", e.span.endColumn}}},
                   {"kind", interp::toString(e.kind)},
                   {"digestBefore", e.before.digest},
                   {"digestAfter", e.after.digest},
                   {"openGoalsAfter", e.after.state->openGoalCount()}});
  }
  return out.dump(2) + "\n";
}

}  // namespace psdbg::debugger
