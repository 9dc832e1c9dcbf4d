// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "psdbg/cli/commands.hpp"
#include "psdbg/matcher/matcher.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "support/samples.hpp"

using namespace psdbg;
using nlohmann::json;
using testkit::readSample;
using testkit::samplePath;
using testkit::sampleProblem;

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

const std::pair<const char*, const char*> kBundled[] = {{"exists.sqp", "exists.kps"}, {"and.sqp", "and_comm.kps"}};

double secondsSince(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fixed(double v, int digits = 2) {
  std::ostringstream os;
  os.precision(digits);
  os << std::fixed << v;
  return os.str();
}

/// Failure with a message; criteria return a summary on success.
struct Failed {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failed{why};
}

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("psdbg_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string writeScratch(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p, std::ios::binary) << text;
  return p.string();
}

struct RunResult {
  int status;
  std::string digest;
  std::string out;
};

RunResult runCli(const std::string& problem, const std::string& script, std::optional<std::string> trace = {}) {
  std::ostringstream out, err;
  cli::RunOptions o;
  o.tracePath = std::move(trace);
  RunResult r{cli::cmdRun(problem, script, o, out, err), "", out.str() + err.str()};
  std::istringstream lines(out.str());
  for (std::string line; std::getline(lines, line);) {
    if (line.rfind("digest ", 0) == 0) r.digest = line.substr(7);
  }
  return r;
}

// 1 ------------------------------------------------------------------------------

std::string propositionalCompleteness() {
  const auto start = Clock::now();
  logic::Problem problem;
  for (const char* a : {"p", "q", "r"}) problem.signature.declarePredicate(a, 0);
  interp::InterpreterOptions options;
  options.maxSteps = 10000;
  const interp::Interpreter interp(interp::CommandRegistry::standard(), options);
  const auto file = testkit::script("script prove() {\n  auto;\n}\n");
  std::size_t total = 0, valid = 0;
  for (int size = 1; size <= 8; ++size) {
    for (const logic::Formula& f : testkit::formulasOfSize(size, {"p", "q", "r"})) {
      problem.conjecture = f;
      const interp::ProofScriptState end = interp.runToEnd(interp.initState(problem, file, ""));
      const bool closed = end.openGoalCount() == 0;
      const bool tautology = testkit::isTautology(f);
      require(closed == tautology, logic::toString(f) + (tautology ? " is valid but stayed open" : " is invalid but closed"));
      ++total;
      valid += tautology;
    }
  }
  const double secs = secondsSince(start);
  require(total >= 5000, "only " + std::to_string(total) + " formulas");
  require(secs < 60, "took " + fixed(secs) + " s");
  return std::to_string(total) + " formulas of size <= 8 (" + std::to_string(valid) + " valid), " + fixed(secs) + " s";
}

// 2 ------------------------------------------------------------------------------

std::string matcherOracle() {
  const auto start = Clock::now();
  testkit::FormulaGenerator gen(2024);
  std::size_t nonEmpty = 0;
  for (int i = 0; i < 1000; ++i) {
    auto [pattern, sequent] = testkit::randomMatchCase(gen, 6, 4);
    const matcher::MatchResult fast = matcher::matchSequent(pattern, sequent);
    const matcher::MatchResult oracle = matcher::bruteForceMatch(pattern, sequent);
    require(fast == oracle, "pair " + std::to_string(i) + ": " + matcher::toString(pattern) + " vs " +
                                logic::toString(sequent) + " gives " + std::to_string(fast.matches.size()) + " vs " +
                                std::to_string(oracle.matches.size()) + " matches");
    nonEmpty += !fast.empty();
  }
  const double secs = secondsSince(start);
  require(secs < 30, "took " + fixed(secs) + " s");
  return "1000 pairs (" + std::to_string(nonEmpty) + " with matches), " + fixed(secs) + " s";
}

// 3 ------------------------------------------------------------------------------

std::string timeTravel() {
  std::mt19937 rng(97);
  std::size_t backs = 0, ops = 0;
  for (int walk = 0; walk < 100; ++walk) {
    auto [prob, scr] = kBundled[walk % 2];
    debugger::DebugSession s(sampleProblem(prob), readSample(scr));
    std::vector<std::string> path{s.digest()};  // digest at each trace length
    std::set<std::string> seen{s.digest()};
    const int n = std::uniform_int_distribution<int>(1, 200)(rng);
    for (int i = 0; i < n; ++i, ++ops) {
      const int op = std::uniform_int_distribution<int>(0, 3)(rng);
      try {
        switch (op) {
          case 0: s.stepOver(); break;
          case 1: s.stepInto(); break;
          case 2: s.stepBack(); break;
          case 3: s.stepIntoReverse(); break;
        }
      } catch (const Error& e) {
        require(e.code() == ErrorCode::Finished || e.code() == ErrorCode::AtStartOfTrace,
                std::string("walk ") + std::to_string(walk) + ": " + e.what());
        continue;
      }
      const std::string where = "walk " + std::to_string(walk) + " op " + std::to_string(i);
      if (op >= 2) {
        ++backs;
        require(seen.count(s.digest()) == 1, where + ": step back reached an unrecorded state");
      }
      const std::size_t t = s.trace().size();
      if (t < path.size()) {
        require(s.digest() == path[t], where + ": replay diverged from the recorded digest sequence");
      } else {
        for (std::size_t k = path.size(); k <= t; ++k) path.push_back(k == t ? s.digest() : s.trace()[k].before.digest);
      }
      for (std::size_t k = 0; k < t; ++k) {
        require(s.trace()[k].before.digest == path[k] && s.trace()[k].after.digest == path[k + 1],
                where + ": trace disagrees with the digest sequence");
      }
      for (const auto& e : s.trace()) seen.insert(e.after.digest);
    }
  }
  return "100 walks, " + std::to_string(ops) + " operations, " + std::to_string(backs) + " reverse steps";
}

// 4 ------------------------------------------------------------------------------

std::string replayDeterminism() {
  std::string summary;
  for (auto [prob, scr] : kBundled) {
    const std::string t1 = (scratch() / (std::string(scr) + ".1.json")).string();
    const std::string t2 = (scratch() / (std::string(scr) + ".2.json")).string();
    const RunResult a = runCli(samplePath(prob), samplePath(scr), t1);
    const RunResult b = runCli(samplePath(prob), samplePath(scr), t2);
    require(a.status == b.status, std::string(scr) + ": statuses differ");
    require(!a.digest.empty() && a.digest == b.digest, std::string(scr) + ": final digests differ");
    const std::string ta = cli::readFile(t1), tb = cli::readFile(t2);
    require(!ta.empty() && ta == tb, std::string(scr) + ": trace files differ");
    summary += std::string(summary.empty() ? "" : ", ") + scr + " " + std::to_string(json::parse(ta).size()) +
               " entries";
  }
  return summary + ", identical digests and trace files";
}

// 5 ------------------------------------------------------------------------------

void collectShape(const kps::Block& block, std::vector<const kps::Statement*>& out) {
  for (const kps::Statement& s : block) {
    out.push_back(&s);
    collectShape(s.body, out);
    for (const auto& c : s.cases) collectShape(c.body, out);
  }
}

std::string endToEnd() {
  // The bundled script has the expected shape.
  const auto file = testkit::sampleScript("exists.kps");
  const kps::Block& body = file->scripts.front().body;
  std::vector<const kps::Statement*> top;
  for (const kps::Statement& s : body) {
    if (s.kind != kps::Statement::Kind::Assignment) top.push_back(&s);
  }
  require(top.size() == 4, "expected 4 top-level statements");
  require(top[0]->kind == kps::Statement::Kind::Command, "first statement is not a command");
  {
    debugger::DebugSession probe(sampleProblem("exists.sqp"), readSample("exists.kps"));
    while (probe.trace().empty() || probe.trace().back().stmtId != top[0]->id) probe.stepInto();
    require(probe.trace().back().kind == interp::StepKind::Strategy, "first statement is not a strategy call");
  }
  require(top[1]->kind == kps::Statement::Kind::Foreach && top[1]->body.size() == 1 && top[1]->body[0].name == "tryclose",
          "second statement is not foreach { tryclose; }");
  require(top[2]->kind == kps::Statement::Kind::Foreach && top[2]->body.size() == 1 && top[2]->body[0].name == "andRight",
          "third statement is not a branching foreach");
  require(top[3]->kind == kps::Statement::Kind::Cases && top[3]->cases.size() == 2, "no two-case cases");
  const kps::CaseBranch& ex = top[3]->cases[1];
  require(ex.pattern.find("(\\exists ?X (\\exists ?Y _))") != std::string::npos, "missing the exists pattern");
  int instantiates = 0;
  for (const kps::Statement& s : ex.body) instantiates += s.name == "instantiate";
  require(instantiates == 2 && ex.body.back().name == "auto", "exists case is not two instantiate calls then auto");

  const auto start = Clock::now();
  const RunResult r = runCli(samplePath("exists.sqp"), samplePath("exists.kps"));
  const double secs = secondsSince(start);
  require(r.status == cli::kClosed, "exit status " + std::to_string(r.status) + ": " + r.out);
  require(secs < 5, "took " + fixed(secs) + " s");
  return "exists.kps closes exists.sqp, status 0, " + fixed(secs, 3) + " s";
}

// 6 ------------------------------------------------------------------------------

std::string interactivePersistence() {
  const std::string scriptText =
      "script m() {\n"
      "  impRight;\n"
      "  andLeft;\n"
      "  andRight;\n"
      "  cases {\n"
      "    case match `==> q`: closeAxiom;\n"
      "  }\n"
      "}\n";
  debugger::DebugSession s(sampleProblem("and.sqp"), scriptText);
  s.continueRun();
  require(s.mode() == debugger::Mode::Finished && s.state().openGoalCount() == 1, "script should leave one open goal");
  const debugger::NodeId goal = s.state().goals().front().node;
  s.startInteractive(goal);
  s.applyInteractive(goal, "closeAxiom", std::nullopt);
  const std::string appended = s.finishInteractive();
  require(s.state().openGoalCount() == 0, "interactive work did not close the proof");
  require(s.scriptText().find(appended) != std::string::npos, "appended block missing from the script");

  const std::string path = writeScratch("persist.kps", s.scriptText());
  const RunResult r = runCli(samplePath("and.sqp"), path);
  require(r.status == cli::kClosed, "re-run exit status " + std::to_string(r.status));
  require(r.digest == s.digest(), "re-run digest " + r.digest + " differs from " + s.digest());
  return "1 goal closed interactively, re-run status 0, digest " + r.digest;
}

// 7 ------------------------------------------------------------------------------

std::string breakpointSemantics() {
  const std::string tracePath = (scratch() / "bp.json").string();
  const RunResult full = runCli(samplePath("exists.sqp"), samplePath("exists.kps"), tracePath);
  require(full.status == cli::kClosed, "reference run failed");
  const json trace = json::parse(cli::readFile(tracePath));

  // First entry that starts a statement while two goals are open.
  std::optional<std::size_t> first;
  for (std::size_t j = 1; j < trace.size() && !first; ++j) {
    if (trace[j]["kind"] != "compoundExit" && trace[j - 1]["openGoalsAfter"].get<int>() >= 2) first = j;
  }
  require(first.has_value(), "no boundary with two open goals");

  debugger::DebugSession s(sampleProblem("exists.sqp"), readSample("exists.kps"));
  std::set<int> lines;
  for (const kps::Statement* st : s.state().file->allStatements()) lines.insert(st->span.beginLine);
  for (int line : lines) s.setBreakpoint(line, "openGoals >= 2");
  s.continueRun();
  require(s.hitBreakpoint().has_value(), "no breakpoint hit");
  const std::size_t index = s.trace().size();
  require(index == *first, "paused before entry " + std::to_string(index) + ", expected " + std::to_string(*first));
  require(s.state().openGoalCount() >= 2, "fewer than two goals at the pause");
  require(s.digest() == trace[*first - 1]["digestAfter"].get<std::string>(), "paused state differs from the trace");
  require(kps::toString(s.state().pc.stmt) == trace[*first]["stmtId"].get<std::string>(),
          "paused at a different statement");
  require(s.state().pc.phase == interp::Phase::Enter, "paused statement already started");
  const int line = trace[*first]["span"]["beginLine"];
  return "paused before trace entry " + std::to_string(index) + " (line " + std::to_string(line) + "), " +
         std::to_string(s.state().openGoalCount()) + " goals open, statement not yet executed";
}

// 8 ------------------------------------------------------------------------------

bool sameFormulaSet(const logic::Sequent& a, const logic::Sequent& b) {
  auto set = [](const std::vector<logic::Formula>& v) {
    std::set<std::string> s;
    for (const auto& f : v) s.insert(logic::toString(f));
    return s;
  };
  return set(a.antecedent) == set(b.antecedent) && set(a.succedent) == set(b.succedent);
}

std::string casePatternGeneration() {
  std::set<std::string> seen;
  std::size_t states = 0, patterns = 0, indistinguishable = 0;
  for (auto [prob, scr] : kBundled) {
    debugger::DebugSession s(sampleProblem(prob), readSample(scr));
    while (s.mode() != debugger::Mode::Finished) {
      s.stepInto();
      require(!s.lastError(), std::string(scr) + ": run failed");
      const interp::ProofScriptState& st = s.state();
      const std::size_t open = st.openGoalCount();
      if (open < 2 || open > 6 || !seen.insert(s.digest()).second) continue;
      ++states;
      std::vector<logic::Sequent> sequents;
      for (const interp::Goal& g : st.goals()) sequents.push_back(st.tree.node(g.node).sequent);
      for (std::size_t t = 0; t < sequents.size(); ++t) {
        std::vector<logic::Sequent> siblings;
        for (std::size_t k = 0; k < sequents.size(); ++k) {
          if (k != t) siblings.push_back(sequents[k]);
        }
        try {
          const matcher::SequentPattern p = matcher::generateCasePattern(sequents[t], siblings);
          require(p.schemaVars.empty(), "generated pattern has schema variables");
          require(!matcher::matchSequent(p, sequents[t]).empty(), matcher::toString(p) + " misses its target");
          for (const logic::Sequent& sib : siblings) {
            require(matcher::matchSequent(p, sib).empty(), matcher::toString(p) + " matches sibling " + logic::toString(sib));
          }
          ++patterns;
        } catch (const Error& e) {
          require(e.code() == ErrorCode::NoDistinguishingPattern, e.what());
          bool clash = false;
          for (const logic::Sequent& sib : siblings) clash = clash || sameFormulaSet(sib, sequents[t]);
          require(clash, "NoDistinguishingPattern for a distinguishable goal " + logic::toString(sequents[t]));
          ++indistinguishable;
        }
      }
    }
  }
  require(states > 0, "no multi-goal states reached");
  return std::to_string(states) + " multi-goal states, " + std::to_string(patterns) + " patterns verified, " +
         std::to_string(indistinguishable) + " indistinguishable goals";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"propositional completeness", propositionalCompleteness},
      {"matcher oracle equivalence", matcherOracle},
      {"time-travel soundness", timeTravel},
      {"replay determinism", replayDeterminism},
      {"exists sample end to end", endToEnd},
      {"interactive persistence", interactivePersistence},
      {"conditional breakpoint", breakpointSemantics},
      {"case-pattern generation", casePatternGeneration},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string verdict, detail;
    try {
      detail = criteria[i].second();
      verdict = "PASS";
    } catch (const Failed& f) {
      detail = f.why;
      verdict = "FAIL";
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
      verdict = "FAIL";
    }
    failed += verdict == "FAIL";
    std::cout << verdict << " " << (i + 1) << " " << criteria[i].first << ": " << detail << std::endl;
  }
  std::error_code ec;
  fs::remove_all(scratch(), ec);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
