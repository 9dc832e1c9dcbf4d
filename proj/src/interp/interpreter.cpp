#include "psdbg/interp/interpreter.hpp"

#include <algorithm>
#include <cstdio>

#include "psdbg/matcher/matcher.hpp"

namespace psdbg::interp {

using kps::Statement;

namespace {

constexpr std::size_t kMaxCallDepth = 256;

std::string frameKindName(Frame::Kind k) {
  static const char* names[] = {"root", "foreach", "theonly", "cases", "call"};
  return names[static_cast<int>(k)];
}

std::int64_t intSetting(const Env& env, const Env& defaults, const std::string& name) {
  auto it = env.find(name);
  const Value& v = it != env.end() ? it->second : defaults.at(name);
  return std::get<std::int64_t>(v);
}

[[noreturn]] void rethrowAt(const Error& e, const kps::Statement& stmt) {
  if (e.location()) throw e;
  throw Error(e.code(), e.message(), stmt.span.begin());
}

const kps::Block* blockFor(const Statement& owner, int tag) {
  if (tag < 0) return &owner.body;
  if (static_cast<std::size_t>(tag) < owner.cases.size()) return &owner.cases[tag].body;
  return &*owner.defaultBlock;
}

}  // namespace

std::vector<NodeId> openGoalsUnder(const calculus::ProofTree& tree, NodeId root) {
  return tree.openLeavesUnder(root);
}

std::vector<Goal> ProofScriptState::goals() const {
  std::vector<Goal> out;
  for (const auto& [node, env] : envs) out.push_back(Goal{node, env});
  return out;
}

const kps::Statement* ProofScriptState::currentStatement() const {
  if (finished || !file) return nullptr;
  return file->statement(pc.stmt);
}

Env ProofScriptState::proverDefaults() const {
  return Env{{"prover.maxSteps", options.maxSteps}, {"prover.instLimit", options.instLimit}};
}

std::string toString(StepKind kind) {
  switch (kind) {
    case StepKind::Atomic: return "atomic";
    case StepKind::CompoundEnter: return "compoundEnter";
    case StepKind::CompoundExit: return "compoundExit";
    case StepKind::Strategy: return "strategy";
  }
  return "?";
}

std::string fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize(const ProofScriptState& s) {
  std::string out = "script " + fnv1a(s.file ? s.file->sourceText : "") + " entry " + s.entry + "\n";
  out += calculus::serialize(s.tree);
  for (const auto& [node, env] : s.envs) {
    out += "env " + std::to_string(node) + ":";
    for (const auto& [k, v] : env) out += " " + k + "=" + canonical(v);
    out += "\n";
  }
  out += "selected " + (s.selected ? std::to_string(*s.selected) : std::string("-")) + "\n";
  for (const Frame& f : s.frames) {
    out += "frame " + frameKindName(f.kind) + " " + kps::toString(f.owner) + " tag " + std::to_string(f.blockTag) +
           (f.block ? " at " + std::to_string(f.index) : std::string(" idle")) + " scope " +
           std::to_string(f.scopeRoot) + " work";
    for (const auto& [g, c] : f.worklist) out += " " + std::to_string(g) + "/" + std::to_string(c);
    out += "\n";
  }
  out += "pc " + kps::toString(s.pc.stmt) + (s.pc.phase == Phase::Enter ? " enter" : " exit") + "\n";
  out += "finished " + std::string(s.finished ? "1" : "0") + " maxSteps " + std::to_string(s.options.maxSteps) +
         " instLimit " + std::to_string(s.options.instLimit) + "\n";
  return out;
}

std::string digest(const ProofScriptState& state) { return fnv1a(serialize(state)); }

void CommandRegistry::add(CommandHandler handler) {
  std::string name = handler.name;
  handlers_.insert_or_assign(std::move(name), std::move(handler));
}

const CommandHandler* CommandRegistry::find(std::string_view name) const {
  auto it = handlers_.find(name);
  return it == handlers_.end() ? nullptr : &it->second;
}

std::set<std::string, std::less<>> CommandRegistry::names() const {
  std::set<std::string, std::less<>> out;
  for (const auto& [name, h] : handlers_) out.insert(name);
  return out;
}

Interpreter::Interpreter(CommandRegistry registry, InterpreterOptions options)
    : registry_(std::move(registry)), options_(options) {}

EvalContext Interpreter::evalContext(const ProofScriptState& s, const Env* env, const Env* defaults) const {
  EvalContext ctx;
  ctx.env = env;
  ctx.defaults = defaults;
  ctx.openGoals = static_cast<std::int64_t>(s.openGoalCount());
  const Statement* st = s.currentStatement();
  ctx.currentLine = st ? st->span.beginLine : 0;
  ctx.signature = &s.tree.signature();
  return ctx;
}

ProofScriptState Interpreter::initState(const logic::Problem& problem, std::shared_ptr<const kps::ScriptFile> file,
                                        const std::string& entry) const {
  const kps::Script* script = entry.empty() ? &file->scripts.front() : file->find(entry);
  if (!script) throw Error(ErrorCode::UnknownScript, "no script named '" + entry + "'");
  ProofScriptState s{file, script->name, calculus::ProofTree(problem.signature, problem.rootSequent()),
                     {}, 0, {}, {}, false, options_};
  Env env;
  Env defaults = s.proverDefaults();
  for (const kps::Parameter& p : script->params) {
    if (!p.defaultValue) {
      throw Error(ErrorCode::MissingParameter, "entry script '" + script->name + "' needs a value for '" +
                                                   p.name + "'");
    }
    env[p.name] = evalExpr(*p.defaultValue, evalContext(s, &env, &defaults));
  }
  s.envs[0] = std::move(env);
  Frame root;
  root.block = &script->body;
  s.frames.push_back(root);
  normalize(s);
  return s;
}

void Interpreter::normalize(ProofScriptState& s) const {
  while (true) {
    Frame& f = s.frames.back();
    if (f.block && f.index < f.block->size()) {
      s.pc = ProgramCounter{(*f.block)[f.index].id, Phase::Enter};
      return;
    }
    if (f.kind == Frame::Kind::Foreach || f.kind == Frame::Kind::Cases) {
      while (!f.worklist.empty() && !s.tree.isOpenLeaf(f.worklist.front().first)) f.worklist.erase(f.worklist.begin());
      if (!f.worklist.empty()) {
        auto [goal, tag] = f.worklist.front();
        f.worklist.erase(f.worklist.begin());
        f.block = blockFor(*s.file->statement(f.owner), tag);
        f.blockTag = tag;
        f.index = 0;
        f.scopeRoot = goal;
        s.selected = goal;
        continue;
      }
    }
    if (f.kind == Frame::Kind::Root) {
      s.finished = true;
      s.pc = ProgramCounter{};
      return;
    }
    s.pc = ProgramCounter{f.owner, Phase::Exit};
    return;
  }
}

NodeId Interpreter::requireGoal(ProofScriptState& s) const {
  NodeId scope = s.frames.back().scopeRoot;
  if (s.selected && s.tree.isOpenLeaf(*s.selected) && s.tree.isAncestorOrSelf(scope, *s.selected)) {
    return *s.selected;
  }
  auto open = openGoalsUnder(s.tree, scope);
  if (open.size() == 1) {
    s.selected = open.front();
    return open.front();
  }
  if (open.empty()) throw Error(ErrorCode::NoOpenGoals, "no open goal to work on");
  throw Error(ErrorCode::NoSelectedGoal,
              std::to_string(open.size()) + " open goals and none selected; use foreach, theonly or cases");
}

void Interpreter::runCommand(ProofScriptState& s, NodeId goal, const Statement& stmt, StepInfo& info) const {
  const CommandHandler* handler = registry_.find(stmt.name);
  if (!handler) throw Error(ErrorCode::UnknownCommand, "unknown command '" + stmt.name + "'", stmt.span.begin());
  const Env defaults = s.proverDefaults();
  const Env& env = s.envs.at(goal);
  EvalContext ctx = evalContext(s, &env, &defaults);
  Env args;
  for (const kps::Argument& a : stmt.args) {
    const kps::Expr& e = a.value;
    bool bareName = e.kind == kps::Expr::Kind::VarRef && !env.count(e.text) && !defaults.count(e.text) &&
                    e.text != "openGoals" && e.text != "currentLine";
    args[a.name] = bareName ? Value(e.text) : evalExpr(e, ctx);
  }
  for (const std::string& req : handler->requiredArgs) {
    if (!args.count(req)) {
      throw Error(ErrorCode::MissingArgument, stmt.name + " requires argument '" + req + "'", stmt.span.begin());
    }
  }
  const Env envCopy = env;
  CommandContext cc{s.tree, goal, args, envCopy, intSetting(envCopy, defaults, "prover.maxSteps"),
                    intSetting(envCopy, defaults, "prover.instLimit")};
  CommandOutcome outcome;
  try {
    outcome = handler->apply(cc);
  } catch (const Error& e) {
    throw Error(ErrorCode::HandlerError, stmt.name + ": " + std::string(toString(e.code())) + ": " + e.message(),
                stmt.span.begin());
  }
  if (!s.tree.isOpenLeaf(goal)) s.envs.erase(goal);
  for (NodeId leaf : openGoalsUnder(s.tree, goal)) s.envs.try_emplace(leaf, envCopy);
  s.selected.reset();
  for (NodeId leaf : s.tree.leavesUnder(goal)) {
    if (s.tree.isOpenLeaf(leaf)) {
      s.selected = leaf;
      break;
    }
  }
  info.kind = outcome.strategy ? StepKind::Strategy : StepKind::Atomic;
  info.goal = goal;
  info.producedSubtreeRoot = outcome.subtreeRoot;
}

void Interpreter::enterCompound(ProofScriptState& s, const Statement& stmt, StepInfo& info) const {
  info.kind = StepKind::CompoundEnter;
  const NodeId scope = s.frames.back().scopeRoot;
  Frame f;
  f.owner = stmt.id;
  f.scopeRoot = scope;
  switch (stmt.kind) {
    case Statement::Kind::Foreach:
      f.kind = Frame::Kind::Foreach;
      for (NodeId g : openGoalsUnder(s.tree, scope)) f.worklist.emplace_back(g, -1);
      break;
    case Statement::Kind::TheOnly: {
      auto open = openGoalsUnder(s.tree, scope);
      if (open.empty()) throw Error(ErrorCode::NoOpenGoals, "theonly: no open goal");
      if (open.size() > 1) {
        throw Error(ErrorCode::MultipleGoalsNoSelector,
                    "theonly: " + std::to_string(open.size()) + " open goals, expected exactly one");
      }
      f.kind = Frame::Kind::TheOnly;
      f.block = &stmt.body;
      f.scopeRoot = open.front();
      s.selected = open.front();
      info.goal = open.front();
      break;
    }
    case Statement::Kind::Cases: {
      f.kind = Frame::Kind::Cases;
      std::vector<matcher::SequentPattern> patterns;
      for (const kps::CaseBranch& c : stmt.cases) {
        patterns.push_back(matcher::parsePattern(c.pattern, &s.tree.signature(),
                                                 {c.patternSpan.beginLine, c.patternSpan.beginColumn + 1}));
      }
      for (NodeId g : openGoalsUnder(s.tree, scope)) {
        Env& env = s.envs.at(g);
        matcher::Binding pre;
        for (const auto& [name, v] : env) {
          if (auto* t = std::get_if<logic::Term>(&v)) pre.emplace(name, *t);
          if (auto* fm = std::get_if<logic::Formula>(&v)) pre.emplace(name, *fm);
        }
        int chosen = -2;
        for (std::size_t k = 0; k < patterns.size() && chosen == -2; ++k) {
          matcher::MatchResult r = matcher::matchSequent(patterns[k], s.tree.node(g).sequent, pre);
          if (r.empty()) continue;
          for (const auto& [name, v] : r.canonical().binding) {
            env[name] = std::visit([](const auto& x) { return Value(x); }, v);
          }
          chosen = static_cast<int>(k);
        }
        if (chosen == -2 && stmt.defaultBlock) chosen = static_cast<int>(stmt.cases.size());
        if (chosen != -2) f.worklist.emplace_back(g, chosen);
      }
      break;
    }
    case Statement::Kind::ScriptCall: {
      if (s.frames.size() >= kMaxCallDepth) throw Error(ErrorCode::RangeError, "script calls nested too deeply");
      NodeId goal = requireGoal(s);
      const kps::Script* callee = s.file->find(stmt.name);
      if (!callee) throw Error(ErrorCode::UnknownScript, "no script named '" + stmt.name + "'");
      const Env defaults = s.proverDefaults();
      Env& env = s.envs.at(goal);
      Env bound;
      for (const kps::Argument& a : stmt.args) {
        bool known = std::any_of(callee->params.begin(), callee->params.end(),
                                 [&](const kps::Parameter& p) { return p.name == a.name; });
        if (!known) throw Error(ErrorCode::MissingParameter, "script '" + stmt.name + "' has no parameter '" + a.name + "'");
        bound[a.name] = evalExpr(a.value, evalContext(s, &env, &defaults));
      }
      for (const kps::Parameter& p : callee->params) {
        if (bound.count(p.name)) continue;
        if (!p.defaultValue) {
          throw Error(ErrorCode::MissingParameter, "missing argument '" + p.name + "' for script '" + stmt.name + "'");
        }
        Env scope = env;
        for (auto& [k, v] : bound) scope[k] = v;
        bound[p.name] = evalExpr(*p.defaultValue, evalContext(s, &scope, &defaults));
      }
      for (auto& [k, v] : bound) env[k] = v;
      f.kind = Frame::Kind::Call;
      f.block = &callee->body;
      f.scopeRoot = goal;
      s.selected = goal;
      info.goal = goal;
      break;
    }
    default: break;
  }
  s.frames.push_back(std::move(f));
}

ProofScriptState Interpreter::executeStatement(const ProofScriptState& state, StepInfo* infoOut) const {
  if (state.finished) throw Error(ErrorCode::Finished, "the script has finished");
  ProofScriptState s = state;
  StepInfo info;
  info.pc = s.pc;
  const Statement* stmt = s.file->statement(s.pc.stmt);
  if (!stmt) throw Error(ErrorCode::InvalidRequest, "program counter does not name a statement");
  try {
    if (s.pc.phase == Phase::Exit) {
      Frame done = s.frames.back();
      s.frames.pop_back();
      s.frames.back().index++;
      if (done.kind != Frame::Kind::Call || !(s.selected && s.tree.isOpenLeaf(*s.selected))) s.selected.reset();
      info.kind = StepKind::CompoundExit;
    } else {
      switch (stmt->kind) {
        case Statement::Kind::Command: {
          NodeId goal = requireGoal(s);
          runCommand(s, goal, *stmt, info);
          s.frames.back().index++;
          break;
        }
        case Statement::Kind::Assignment: {
          NodeId goal = requireGoal(s);
          const Env defaults = s.proverDefaults();
          Env& env = s.envs.at(goal);
          Value v = evalExpr(stmt->value, evalContext(s, &env, &defaults));
          if (stmt->name.rfind("prover.", 0) == 0) {
            if (!defaults.count(stmt->name)) {
              throw Error(ErrorCode::UndefinedVariable, "unknown prover setting '" + stmt->name + "'");
            }
            auto* i = std::get_if<std::int64_t>(&v);
            if (!i) throw Error(ErrorCode::TypeError, stmt->name + " expects Int, got " + typeName(v));
            if (*i < 0) throw Error(ErrorCode::RangeError, stmt->name + " must be >= 0");
          }
          env[stmt->name] = std::move(v);
          info.kind = StepKind::Atomic;
          info.goal = goal;
          s.frames.back().index++;
          break;
        }
        default: enterCompound(s, *stmt, info); break;
      }
    }
  } catch (const Error& e) {
    rethrowAt(e, *stmt);
  }
  normalize(s);
  if (infoOut) *infoOut = info;
  return s;
}

ProofScriptState Interpreter::runToEnd(ProofScriptState state) const {
  while (!state.finished) state = executeStatement(state);
  return state;
}

ProofScriptState Interpreter::applyCommand(const ProofScriptState& state, NodeId goal, const Statement& command,
                                           StepInfo* infoOut) const {
  ProofScriptState s = state;
  s.tree.requireOpenLeaf(goal);
  StepInfo info;
  info.pc = s.pc;
  runCommand(s, goal, command, info);
  if (infoOut) *infoOut = info;
  return s;
}

ProofScriptState Interpreter::rebind(const ProofScriptState& state,
                                     std::shared_ptr<const kps::ScriptFile> file) const {
  ProofScriptState s = state;
  s.file = std::move(file);
  const kps::Script* script = s.file->find(s.entry);
  if (!script) throw Error(ErrorCode::UnknownScript, "no script named '" + s.entry + "'");
  for (Frame& f : s.frames) {
    if (f.kind == Frame::Kind::Root) {
      f.block = &script->body;
      continue;
    }
    const Statement* owner = s.file->statement(f.owner);
    if (!owner) throw Error(ErrorCode::UnknownScript, "statement " + kps::toString(f.owner) + " vanished");
    if (f.kind == Frame::Kind::Call) {
      const kps::Script* callee = s.file->find(owner->name);
      if (!callee) throw Error(ErrorCode::UnknownScript, "no script named '" + owner->name + "'");
      f.block = &callee->body;
    } else if (f.block) {
      f.block = blockFor(*owner, f.blockTag);
    }
  }
  if (s.finished) {
    s.finished = false;
    normalize(s);
  } else if (s.pc.stmt.valid() && !s.file->statement(s.pc.stmt)) {
    throw Error(ErrorCode::UnknownScript, "statement " + kps::toString(s.pc.stmt) + " vanished");
  }
  return s;
}

}  // namespace psdbg::interp
