#include "psdbg/cli/commands.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "psdbg/kps/validate.hpp"
#include "psdbg/matcher/matcher.hpp"

namespace psdbg::cli {

namespace {

void report(std::ostream& err, const std::string& path, const Error& e) {
  err << path << ":";
  if (e.location()) err << e.location()->line << ":" << e.location()->column << ":";
  err << " " << toString(e.code()) << ": " << e.message() << "\n";
}

void printSpan(std::ostream& os, const kps::SourceSpan& s) {
  os << s.beginLine << ":" << s.beginColumn << "-" << s.endLine << ":" << s.endColumn;
}

/// Reads `path` into `text`; reports and returns false when unreadable.
bool load(const std::string& path, std::string& text, std::ostream& err) {
  try {
    text = readFile(path);
    return true;
  } catch (const Error& e) {
    err << "error: " << e.message() << "\n";
    return false;
  }
}

void printGoals(std::ostream& out, const interp::ProofScriptState& s) {
  const auto goals = s.goals();
  out << goals.size() << (goals.size() == 1 ? " open goal" : " open goals") << "\n";
  for (std::size_t i = 0; i < goals.size(); ++i) {
    out << "  [" << i << "] node " << goals[i].node << ": " << logic::toString(s.tree.node(goals[i].node).sequent)
        << "\n";
  }
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cmdCheck(const std::string& scriptPath, const std::optional<std::string>& problemPath, std::ostream& out,
             std::ostream& err) {
  std::string text, problemText;
  if (!load(scriptPath, text, err)) return kUsageError;
  if (problemPath && !load(*problemPath, problemText, err)) return kUsageError;
  std::optional<logic::Problem> problem;
  if (problemPath) {
    try {
      problem = logic::parseProblem(problemText);
    } catch (const Error& e) {
      report(err, *problemPath, e);
      return kScriptError;
    }
  }
  kps::ScriptFile file;
  try {
    file = kps::parseScript(text);
  } catch (const Error& e) {
    report(err, scriptPath, e);
    return kScriptError;
  }
  const auto commands = interp::CommandRegistry::standard().names();
  const auto diagnostics =
      problem ? kps::validate(file, commands, problem->signature) : kps::validate(file, commands);
  std::size_t warnings = 0;
  for (const kps::Diagnostic& d : diagnostics) {
    err << scriptPath << ":" << kps::toString(d) << "\n";
    if (d.severity == kps::Diagnostic::Severity::Warning) ++warnings;
  }
  if (kps::hasErrors(diagnostics)) return kScriptError;
  out << scriptPath << ": ok, " << file.scripts.size() << (file.scripts.size() == 1 ? " script" : " scripts") << ", "
      << warnings << (warnings == 1 ? " warning" : " warnings") << "\n";
  return kClosed;
}

int cmdRun(const std::string& problemPath, const std::string& scriptPath, const RunOptions& options,
           std::ostream& out, std::ostream& err) {
  std::string problemText, scriptText;
  if (!load(problemPath, problemText, err) || !load(scriptPath, scriptText, err)) return kUsageError;
  logic::Problem problem;
  try {
    problem = logic::parseProblem(problemText);
  } catch (const Error& e) {
    report(err, problemPath, e);
    return kScriptError;
  }
  debugger::SessionOptions so;
  so.entry = options.entry;
  if (options.maxSteps) so.interpreter.maxSteps = *options.maxSteps;
  std::optional<debugger::DebugSession> session;
  try {
    session.emplace(std::move(problem), std::move(scriptText), so);
  } catch (const Error& e) {
    report(err, scriptPath, e);
    return kScriptError;
  }
  session->continueRun();

  if (options.tracePath) {
    std::ofstream trace(*options.tracePath, std::ios::binary);
    trace << debugger::exportTrace(session->trace()) << "\n";
    if (!trace) {
      err << "error: cannot write '" << *options.tracePath << "'\n";
      return kUsageError;
    }
  }
  if (const auto& e = session->lastError()) {
    report(err, scriptPath, *e);
    if (const kps::Statement* s = session->state().currentStatement()) {
      err << "  in statement ";
      printSpan(err, s->span);
      err << "\n";
    }
    return kScriptError;
  }
  const interp::ProofScriptState& s = session->state();
  out << "digest " << session->digest() << "\n";
  if (s.openGoalCount() == 0) {
    out << "proof closed\n";
    return kClosed;
  }
  printGoals(out, s);
  return kOpenGoals;
}

int cmdMatch(const std::string& problemPath, const std::string& pattern, const std::optional<std::string>& sequentText,
             std::ostream& out, std::ostream& err) {
  std::string problemText;
  if (!load(problemPath, problemText, err)) return kUsageError;
  logic::Problem problem;
  try {
    problem = logic::parseProblem(problemText);
  } catch (const Error& e) {
    report(err, problemPath, e);
    return kScriptError;
  }
  matcher::SequentPattern p;
  logic::Sequent target;
  try {
    p = matcher::parsePattern(pattern, &problem.signature);
  } catch (const Error& e) {
    report(err, "<pattern>", e);
    return kScriptError;
  }
  try {
    target = sequentText ? logic::parseSequent(*sequentText, problem.signature) : problem.rootSequent();
  } catch (const Error& e) {
    report(err, "<sequent>", e);
    return kScriptError;
  }
  const matcher::MatchResult r = matcher::matchSequent(p, target);
  out << "sequent: " << logic::toString(target) << "\n";
  out << "pattern: " << matcher::toString(p) << "\n";
  out << r.matches.size() << (r.matches.size() == 1 ? " match" : " matches") << "\n";
  if (r.empty()) return kClosed;

  std::vector<std::pair<std::string, std::string>> rows;
  std::size_t width = std::string("bindings").size();
  for (const matcher::Match& m : r.matches) {
    std::string bindings, assignment;
    for (const auto& [name, value] : m.binding) {
      if (!bindings.empty()) bindings += ", ";
      bindings += name + " = " + matcher::toString(value);
    }
    if (bindings.empty()) bindings = "-";
    for (const logic::FormulaPosition& pos : m.assignment) {
      if (!assignment.empty()) assignment += ", ";
      assignment += logic::toString(pos);
    }
    if (assignment.empty()) assignment = "-";
    width = std::max(width, bindings.size());
    rows.emplace_back(std::move(bindings), std::move(assignment));
  }
  out << "#   " << pad("bindings", width) << "  assignment\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out << pad(std::to_string(i + 1), 4) << pad(rows[i].first, width) << "  " << rows[i].second << "\n";
  }
  return kClosed;
}

int cmdDebug(const std::string& problemPath, const std::string& scriptPath, std::istream& in, std::ostream& out,
             std::ostream& err) {
  std::string problemText, scriptText;
  if (!load(problemPath, problemText, err) || !load(scriptPath, scriptText, err)) return kUsageError;
  std::optional<Repl> repl;
  try {
    logic::Problem problem;
    try {
      problem = logic::parseProblem(problemText);
    } catch (const Error& e) {
      report(err, problemPath, e);
      return kScriptError;
    }
    repl.emplace(scriptPath, debugger::DebugSession(std::move(problem), std::move(scriptText)));
  } catch (const Error& e) {
    report(err, scriptPath, e);
    return kScriptError;
  }
  repl->execute("goals", out);
  std::string line;
  while (true) {
    out << "(psdbg) " << std::flush;
    if (!std::getline(in, line)) break;
    if (!repl->execute(line, out)) break;
  }
  const interp::ProofScriptState& s = repl->session().state();
  if (!s.finished) return kOpenGoals;
  return s.openGoalCount() == 0 ? kClosed : kOpenGoals;
}

int defaultPort() {
  if (const char* env = std::getenv("PSDBG_PORT")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v < 65536) return static_cast<int>(v);
  }
  return kDefaultPort;
}

int cmdServe(const ServeOptions& options, std::ostream& out, std::ostream& err) {
  server::ProtocolServer protocol;
  if (options.problemPath || options.scriptPath) {
    if (!options.problemPath || !options.scriptPath) {
      err << "error: --problem and --script go together\n";
      return kUsageError;
    }
    std::string problemText, scriptText;
    if (!load(*options.problemPath, problemText, err) || !load(*options.scriptPath, scriptText, err)) {
      return kUsageError;
    }
    try {
      const std::string id = protocol.createSession(problemText, scriptText, {});
      out << "preloaded session " << id << "\n";
    } catch (const Error& e) {
      report(err, *options.problemPath + " / " + *options.scriptPath, e);
      return kScriptError;
    }
  }
  server::WebServer web(protocol, options.staticRoot);
  try {
    web.listen(options.host, options.port);
  } catch (const Error& e) {
    err << "error: " << e.message() << "\n";
    return kUsageError;
  }
  out << "serving protocol v" << server::kProtocolVersion << " on ws://" << options.host << ":" << web.port()
      << "/ws\n"
      << std::flush;
  if (options.ready) options.ready(web, protocol);
  std::thread watcher;
  std::atomic<bool> done{false};
  if (options.interrupt) {
    watcher = std::thread([&] {
      while (!done && !*options.interrupt) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      web.stop();
    });
  }
  web.run();
  done = true;
  if (watcher.joinable()) watcher.join();
  web.stop();
  return kClosed;
}

}  // namespace psdbg::cli
