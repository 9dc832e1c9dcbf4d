#include <fstream>
#include <iostream>
#include <sstream>

#include "psdbg/cli/commands.hpp"

namespace psdbg::cli {

namespace {

std::vector<std::string> words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

/// Text after the first `n` words.
std::string restAfter(const std::string& line, std::size_t n) {
  std::size_t i = 0;
  for (std::size_t k = 0; k < n; ++k) {
    i = line.find_first_not_of(" \t", i);
    if (i == std::string::npos) return "";
    i = line.find_first_of(" \t", i);
    if (i == std::string::npos) return "";
  }
  i = line.find_first_not_of(" \t", i);
  if (i == std::string::npos) return "";
  std::size_t end = line.find_last_not_of(" \t\r");
  return line.substr(i, end - i + 1);
}

long long number(const std::string& text, const char* what) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::InvalidRequest, std::string("expected ") + what + ", got '" + text + "'");
}

std::string sourceLine(const std::string& text, int line) {
  std::istringstream in(text);
  std::string l;
  for (int i = 1; std::getline(in, l); ++i) {
    if (i == line) {
      std::size_t b = l.find_first_not_of(" \t");
      return b == std::string::npos ? "" : l.substr(b);
    }
  }
  return "";
}

}  // namespace

Repl::Repl(std::string scriptPath, debugger::DebugSession session)
    : scriptPath_(std::move(scriptPath)), session_(std::move(session)) {}

const char* Repl::help() {
  return "commands:\n"
         "  b <line> [cond]   set a breakpoint, optionally conditional\n"
         "  d <id>            delete a breakpoint\n"
         "  s | si            step over | step into\n"
         "  rb | rbi          step back | step back into\n"
         "  c                 continue to the next breakpoint or the end\n"
         "  goals             list open goals\n"
         "  goal [n]          show goal n (default 0) with its variables\n"
         "  tree              show the proof tree\n"
         "  vars              show variables of the selected goal\n"
         "  trace             show the execution trace\n"
         "  apply [#n] <cmd>  apply a command to goal n interactively\n"
         "  save              append interactive work to the script file\n"
         "  q                 quit\n";
}

bool Repl::execute(const std::string& line, std::ostream& out) {
  const std::vector<std::string> w = words(line);
  if (w.empty()) return true;
  const std::string& verb = w[0];
  try {
    if (verb == "q") return false;
    if (verb == "s" || verb == "si" || verb == "rb" || verb == "rbi" || verb == "c") {
      if (w.size() != 1) throw Error(ErrorCode::InvalidRequest, "'" + verb + "' takes no arguments");
      if (verb == "s") session_.stepOver();
      if (verb == "si") session_.stepInto();
      if (verb == "rb") session_.stepBack();
      if (verb == "rbi") session_.stepIntoReverse();
      if (verb == "c") session_.continueRun();
      outcome(out);
    } else if (verb == "b") {
      if (w.size() < 2) throw Error(ErrorCode::InvalidRequest, "usage: b <line> [cond]");
      const int lineNo = static_cast<int>(number(w[1], "a line number"));
      std::string cond = restAfter(line, 2);
      int id = session_.setBreakpoint(lineNo, cond.empty() ? std::nullopt : std::optional<std::string>(cond));
      out << "breakpoint " << id << " at line " << lineNo;
      if (!cond.empty()) out << " if " << cond;
      out << "\n";
    } else if (verb == "d") {
      if (w.size() != 2) throw Error(ErrorCode::InvalidRequest, "usage: d <id>");
      const int id = static_cast<int>(number(w[1], "a breakpoint id"));
      session_.removeBreakpoint(id);
      out << "deleted breakpoint " << id << "\n";
    } else if (verb == "goals") {
      goals(out);
    } else if (verb == "goal") {
      goal(out, w.size() > 1 ? static_cast<std::size_t>(number(w[1], "a goal index")) : 0);
    } else if (verb == "tree") {
      tree(out, session_.state().tree.root(), 0);
    } else if (verb == "vars") {
      vars(out);
    } else if (verb == "trace") {
      trace(out);
    } else if (verb == "apply") {
      const bool indexed = w.size() > 1 && w[1].size() > 1 && w[1][0] == '#';
      std::string command = restAfter(line, indexed ? 2 : 1);
      if (command.empty()) throw Error(ErrorCode::InvalidRequest, "usage: apply [#n] <command>");
      if (command.back() == ';') command.pop_back();
      const debugger::NodeId target = applyTarget(indexed ? w[1].substr(1) : "");
      if (session_.mode() != debugger::Mode::Interactive) session_.startInteractive(target);
      session_.applyInteractive(target, command);
      out << "applied to node " << target << "\n";
      goals(out);
    } else if (verb == "save") {
      const std::string appended = session_.finishInteractive();
      std::ofstream file(scriptPath_, std::ios::binary | std::ios::trunc);
      file << session_.scriptText();
      if (!file) throw Error(ErrorCode::IoError, "cannot write '" + scriptPath_ + "'");
      out << "appended to " << scriptPath_ << ":\n" << appended;
      if (session_.usedFallbackPattern()) out << "note: some goals needed an exact full-sequent pattern\n";
      location(out);
    } else {
      out << Repl::help();
    }
  } catch (const Error& e) {
    out << "error: " << toString(e.code()) << ": " << e.message() << "\n";
  }
  return true;
}

void Repl::location(std::ostream& out) const {
  const interp::ProofScriptState& s = session_.state();
  if (s.finished) {
    if (s.openGoalCount() == 0) {
      out << "finished: proof closed\n";
    } else {
      out << "finished: " << s.openGoalCount() << " open goal" << (s.openGoalCount() == 1 ? "" : "s") << "\n";
    }
    return;
  }
  const kps::Statement* stmt = s.currentStatement();
  if (!stmt) return;
  const int lineNo = s.pc.phase == interp::Phase::Enter ? stmt->span.beginLine : stmt->span.endLine;
  out << (s.pc.phase == interp::Phase::Enter ? "at line " : "leaving line ") << lineNo << ": "
      << sourceLine(s.file->sourceText, lineNo) << "\n";
}

void Repl::outcome(std::ostream& out) const {
  if (const auto& e = session_.lastError()) {
    out << "error: " << toString(e->code()) << ": " << e->message() << "\n";
  }
  if (const auto& w = session_.lastWarning()) out << "warning: " << *w << "\n";
  if (auto b = session_.hitBreakpoint()) out << "breakpoint " << *b << " hit\n";
  location(out);
}

void Repl::goals(std::ostream& out) const {
  const interp::ProofScriptState& s = session_.state();
  const auto gs = s.goals();
  out << gs.size() << (gs.size() == 1 ? " open goal" : " open goals") << "\n";
  for (std::size_t i = 0; i < gs.size(); ++i) {
    const calculus::ProofNode& n = s.tree.node(gs[i].node);
    out << (s.selected == gs[i].node ? "* " : "  ") << "[" << i << "] node " << gs[i].node;
    if (n.branchLabel) out << " (" << *n.branchLabel << ")";
    out << ": " << logic::toString(n.sequent) << "\n";
  }
}

void Repl::goal(std::ostream& out, std::size_t index) const {
  const interp::ProofScriptState& s = session_.state();
  const auto gs = s.goals();
  if (index >= gs.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "goal " + std::to_string(index) + " of " + std::to_string(gs.size()) + " open goals");
  }
  const calculus::ProofNode& n = s.tree.node(gs[index].node);
  out << "node " << n.id;
  if (n.branchLabel) out << " (" << *n.branchLabel << ")";
  out << "\n";
  for (std::size_t i = 0; i < n.sequent.antecedent.size(); ++i) {
    out << "  ante:" << i << "  " << logic::toString(n.sequent.antecedent[i]) << "\n";
  }
  out << "  ==>\n";
  for (std::size_t i = 0; i < n.sequent.succedent.size(); ++i) {
    out << "  succ:" << i << "  " << logic::toString(n.sequent.succedent[i]) << "\n";
  }
  for (const auto& [name, value] : gs[index].env) {
    out << "  " << name << " : " << interp::typeName(value) << " = " << interp::toString(value) << "\n";
  }
}

void Repl::tree(std::ostream& out, debugger::NodeId id, int depth) const {
  const calculus::ProofNode& n = session_.state().tree.node(id);
  out << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "[" << id << "]";
  if (n.branchLabel) out << " (" << *n.branchLabel << ")";
  out << " " << logic::toString(n.sequent);
  if (n.ruleApplied) {
    out << "  by " << n.ruleApplied->ruleName;
    if (n.ruleApplied->position) out << " @" << logic::toString(*n.ruleApplied->position);
  } else {
    out << (n.isOpenLeaf() ? "  OPEN" : "  closed");
  }
  out << "\n";
  for (debugger::NodeId c : n.children) tree(out, c, depth + 1);
}

void Repl::vars(std::ostream& out) const {
  const interp::ProofScriptState& s = session_.state();
  for (const interp::Goal& g : s.goals()) {
    if (s.selected && *s.selected != g.node) continue;
    out << "node " << g.node << (s.selected ? " (selected)" : "") << ":";
    if (g.env.empty()) out << " no variables";
    out << "\n";
    for (const auto& [name, value] : g.env) {
      out << "  " << name << " : " << interp::typeName(value) << " = " << interp::toString(value) << "\n";
    }
  }
}

void Repl::trace(std::ostream& out) const {
  const auto& t = session_.trace();
  if (t.empty()) out << "trace is empty\n";
  for (const debugger::TraceEntry& e : t) {
    out << "  #" << e.index << " " << interp::toString(e.kind) << " line " << e.span.beginLine << " open "
        << e.after.state->openGoalCount() << " " << e.after.digest << "\n";
  }
  if (!session_.redo().empty()) out << "  (" << session_.redo().size() << " undone)\n";
}

debugger::NodeId Repl::applyTarget(const std::string& selector) const {
  const interp::ProofScriptState& s = session_.state();
  const auto gs = s.goals();
  if (!selector.empty()) {
    const auto index = static_cast<std::size_t>(number(selector, "a goal index"));
    if (index >= gs.size()) {
      throw Error(ErrorCode::IndexOutOfRange,
                  "goal " + std::to_string(index) + " of " + std::to_string(gs.size()) + " open goals");
    }
    return gs[index].node;
  }
  if (s.selected && s.envs.count(*s.selected)) return *s.selected;
  if (gs.size() == 1) return gs.front().node;
  if (gs.empty()) throw Error(ErrorCode::NoOpenGoals, "no open goals");
  throw Error(ErrorCode::MultipleGoalsNoSelector, "several open goals; use apply #n <command>");
}

}  // namespace psdbg::cli
