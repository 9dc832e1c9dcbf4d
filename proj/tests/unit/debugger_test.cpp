#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "psdbg/calculus/rules.hpp"
#include "psdbg/debugger/session.hpp"
#include "psdbg/matcher/matcher.hpp"
#include "support/samples.hpp"

using namespace psdbg;
using namespace psdbg::debugger;
using testkit::readSample;
using testkit::sampleProblem;

namespace {

ErrorCode errorOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

DebugSession existsSession() { return DebugSession(sampleProblem("exists.sqp"), readSample("exists.kps")); }
DebugSession andSession() { return DebugSession(sampleProblem("and.sqp"), readSample("and_comm.kps")); }

const char* kThreeGoals = "pred p; pred q; pred r; pred s; assume p | q | r; conjecture s;";

std::string finalDigest(const logic::Problem& problem, const std::string& text) {
  interp::Interpreter in;
  return interp::digest(in.runToEnd(in.initState(problem, testkit::script(text))));
}

TEST(StepOver, CompoundRunsWholeBody) {
  DebugSession s(logic::parseProblem(kThreeGoals), "script m() {\n  simplify;\n  foreach { tryclose; }\n  foreach { auto; }\n}\n");
  s.stepOver();
  ASSERT_EQ(s.state().openGoalCount(), 3u);
  s.stepOver();
  ASSERT_EQ(s.trace().size(), 6u);
  EXPECT_EQ(s.trace()[1].kind, interp::StepKind::CompoundEnter);
  for (int i = 2; i < 5; ++i) EXPECT_EQ(s.trace()[i].kind, interp::StepKind::Strategy);
  EXPECT_EQ(s.trace()[5].kind, interp::StepKind::CompoundExit);
  EXPECT_EQ(s.state().currentStatement()->kind, kps::Statement::Kind::Foreach);
  s.stepOver();
  EXPECT_TRUE(s.state().finished);

  s = DebugSession(sampleProblem("and.sqp"), "script m() {\n  auto;\n}\n");
  s.stepOver();
  EXPECT_EQ(s.trace().back().kind, interp::StepKind::Strategy);
  EXPECT_TRUE(s.trace().back().producedSubtreeRoot);
  EXPECT_TRUE(s.lastStrategyRoot());
  EXPECT_TRUE(s.state().finished);
  EXPECT_EQ(s.mode(), Mode::Finished);
  EXPECT_EQ(errorOf([&] { s.stepOver(); }), ErrorCode::Finished);
}

TEST(StepInto, EntersCompoundsAndMatchesStepOverOnAtoms) {
  DebugSession a = existsSession();
  DebugSession b = existsSession();
  a.stepInto();
  b.stepOver();
  EXPECT_EQ(a.digest(), b.digest());  // assignment
  a.stepInto();
  b.stepOver();
  EXPECT_EQ(a.digest(), b.digest());  // strategy
  EXPECT_EQ(a.lastStrategyRoot(), b.lastStrategyRoot());
  ASSERT_TRUE(a.lastStrategyRoot());
  a.stepInto();
  EXPECT_EQ(a.state().currentStatement()->name, "tryclose");
  EXPECT_EQ(a.state().frames.size(), 2u);

  DebugSession c = existsSession();
  while (c.state().currentStatement()->kind != kps::Statement::Kind::Cases) c.stepOver();
  c.stepInto();
  EXPECT_EQ(c.state().currentStatement()->name, "auto");
  EXPECT_EQ(c.state().currentStatement()->span.beginLine, 7);
}

TEST(StepBack, InvertsForwardSteps) {
  DebugSession s = existsSession();
  EXPECT_EQ(errorOf([&] { s.stepBack(); }), ErrorCode::AtStartOfTrace);
  EXPECT_EQ(errorOf([&] { s.stepIntoReverse(); }), ErrorCode::AtStartOfTrace);
  std::vector<std::string> seen{s.digest()};
  for (int i = 0; i < 5; ++i) {
    s.stepOver();
    seen.push_back(s.digest());
  }
  s.stepBack();
  EXPECT_EQ(s.digest(), seen[4]);
  for (int i = 0; i < 4; ++i) s.stepBack();
  EXPECT_EQ(s.digest(), s.initial().digest);
  EXPECT_TRUE(s.trace().empty());
  EXPECT_FALSE(s.redo().empty());

  // Over the foreach, then back over it in one go.
  s.stepOver();
  s.stepOver();
  const std::string beforeForeach = s.digest();
  s.stepOver();
  s.stepBack();
  EXPECT_EQ(s.digest(), beforeForeach);
  s.stepInto();
  s.stepInto();
  s.stepIntoReverse();
  EXPECT_EQ(s.state().currentStatement()->name, "tryclose");
  s.stepIntoReverse();
  EXPECT_EQ(s.digest(), beforeForeach);
}

TEST(StepBack, RedoKeptUntilDivergence) {
  DebugSession s = existsSession();
  s.stepOver();
  s.stepOver();
  const std::size_t snapshotId = s.current().id;
  s.stepBack();
  ASSERT_EQ(s.redo().size(), 1u);
  s.stepOver();
  EXPECT_EQ(s.current().id, snapshotId);
  EXPECT_TRUE(s.redo().empty());
}

TEST(Continue, RunsToEndWithoutBreakpoints) {
  DebugSession s = existsSession();
  s.continueRun();
  EXPECT_EQ(s.mode(), Mode::Finished);
  EXPECT_TRUE(s.state().tree.isClosed());
  EXPECT_EQ(s.digest(), finalDigest(sampleProblem("exists.sqp"), readSample("exists.kps")));
  for (std::size_t i = 0; i + 1 < s.trace().size(); ++i)
    EXPECT_EQ(s.trace()[i].after.digest, s.trace()[i + 1].before.digest);
}

TEST(Continue, StopsBeforeBreakpointStatement) {
  DebugSession s = existsSession();
  int id = s.setBreakpoint(4);
  s.continueRun();
  EXPECT_EQ(s.hitBreakpoint(), id);
  EXPECT_EQ(s.state().currentStatement()->span.beginLine, 4);
  const kps::StatementId paused = s.state().pc.stmt;
  for (const TraceEntry& e : s.trace()) EXPECT_NE(e.stmtId, paused);
  // Resuming does not stop at the same boundary again; the inner
  // tryclose shares line 4.
  s.continueRun();
  EXPECT_EQ(s.state().currentStatement()->name, "tryclose");
  s.setBreakpointEnabled(id, false);
  s.continueRun();
  EXPECT_EQ(s.mode(), Mode::Finished);
}

TEST(Continue, ConditionalBreakpoint) {
  DebugSession s = existsSession();
  for (int line : {2, 3, 4, 5, 6, 7, 9, 10, 11}) s.setBreakpoint(line, "openGoals >= 2");
  s.continueRun();
  ASSERT_TRUE(s.hitBreakpoint());
  EXPECT_EQ(s.state().openGoalCount(), 2u);
  // Hand trace: the assignment and simplify ran; simplify split the goal.
  EXPECT_EQ(s.trace().size(), 2u);
  EXPECT_EQ(s.state().currentStatement()->span.beginLine, 4);

  DebugSession bad = existsSession();
  bad.setBreakpoint(3, "nothing > 1");
  bad.continueRun();
  EXPECT_TRUE(bad.hitBreakpoint());
  ASSERT_TRUE(bad.lastWarning());
  EXPECT_NE(bad.lastWarning()->find("UndefinedVariable"), std::string::npos);

  DebugSession typed = existsSession();
  typed.setBreakpoint(3, "1 + 1");
  typed.continueRun();
  ASSERT_TRUE(typed.lastWarning());
  EXPECT_NE(typed.lastWarning()->find("TypeError"), std::string::npos);

  DebugSession local = existsSession();
  local.setBreakpoint(3, "prover.instLimit == 0");
  local.continueRun();
  EXPECT_TRUE(local.hitBreakpoint());
  EXPECT_FALSE(local.lastWarning());
}

TEST(Breakpoints, Crud) {
  DebugSession s(sampleProblem("and.sqp"), "// header\nscript m() {\n\n  auto;\n}\n");
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(1); }), ErrorCode::InvalidLine);
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(3); }), ErrorCode::InvalidLine);
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(40); }), ErrorCode::InvalidLine);
  int a = s.setBreakpoint(4);
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(4); }), ErrorCode::InvalidLine);
  int b = s.setBreakpoint(4, "openGoals == 1");
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(4, "openGoals == 1"); }), ErrorCode::InvalidLine);
  EXPECT_EQ(errorOf([&] { s.setBreakpoint(4, "openGoals =="); }), ErrorCode::SyntaxError);
  ASSERT_EQ(s.breakpoints().size(), 2u);
  EXPECT_EQ(s.breakpoints()[1].conditionText, "openGoals == 1");
  s.removeBreakpoint(a);
  ASSERT_EQ(s.breakpoints().size(), 1u);
  EXPECT_EQ(s.breakpoints()[0].id, b);
  EXPECT_EQ(errorOf([&] { s.removeBreakpoint(a); }), ErrorCode::UnknownBreakpoint);
  EXPECT_EQ(errorOf([&] { s.setBreakpointEnabled(a, true); }), ErrorCode::UnknownBreakpoint);
}

TEST(Errors, PauseAtFaultingStatement) {
  DebugSession s(sampleProblem("and.sqp"), "script m() {\n  impRight;\n  orLeft;\n  auto;\n}\n");
  s.continueRun();
  ASSERT_TRUE(s.lastError());
  EXPECT_EQ(s.lastError()->code(), ErrorCode::HandlerError);
  EXPECT_EQ(s.mode(), Mode::Paused);
  EXPECT_EQ(s.state().currentStatement()->name, "orLeft");
  EXPECT_EQ(s.trace().size(), 1u);
  s.stepOver();
  EXPECT_TRUE(s.lastError());
  s.stepBack();
  EXPECT_FALSE(s.lastError());
}

TEST(StateAt, Bounds) {
  DebugSession s = existsSession();
  EXPECT_EQ(errorOf([&] { s.stateAt(0); }), ErrorCode::IndexOutOfRange);
  s.stepOver();
  s.stepOver();
  EXPECT_EQ(s.stateAt(0).digest, s.trace()[0].after.digest);
  EXPECT_EQ(s.stateAt(1).digest, s.digest());
  EXPECT_EQ(errorOf([&] { s.stateAt(-1); }), ErrorCode::IndexOutOfRange);
  EXPECT_EQ(errorOf([&] { s.stateAt(2); }), ErrorCode::IndexOutOfRange);
}

TEST(Trace, Export) {
  DebugSession s = existsSession();
  s.continueRun();
  auto j = nlohmann::json::parse(exportTrace(s.trace()));
  ASSERT_EQ(j.size(), s.trace().size());
  EXPECT_EQ(j[0]["stmtId"], "split_proof#0");
  EXPECT_EQ(j[0]["kind"], "atomic");
  EXPECT_EQ(j[0]["span"]["beginLine"], 2);
  EXPECT_EQ(j[1]["kind"], "strategy");
  EXPECT_EQ(j[1]["openGoalsAfter"], 2);
  EXPECT_EQ(j.back()["openGoalsAfter"], 0);
  EXPECT_EQ(j.back()["digestAfter"], s.digest());
}

TEST(Interactive, OneGoalClosedAndPersisted) {
  auto problem = sampleProblem("and.sqp");
  DebugSession s(problem, "script m() {\n  impRight;\n  andLeft;\n  andRight;\n  closeAxiom;\n}\n");
  s.continueRun();
  ASSERT_EQ(s.state().openGoalCount(), 1u);
  const NodeId goal = s.state().goals()[0].node;
  EXPECT_EQ(errorOf([&] { s.applyInteractive(goal, "closeAxiom"); }), ErrorCode::InvalidMode);
  s.startInteractive(goal);
  EXPECT_EQ(s.mode(), Mode::Interactive);
  EXPECT_EQ(errorOf([&] { s.stepOver(); }), ErrorCode::InvalidMode);
  EXPECT_EQ(errorOf([&] { s.applyInteractive(goal, "andRight"); }), ErrorCode::HandlerError);
  EXPECT_TRUE(s.recordedInteractive().empty());
  s.applyInteractive(goal, "closeAxiom");
  ASSERT_EQ(s.recordedInteractive().size(), 1u);
  std::string block = s.finishInteractive();
  EXPECT_EQ(block, "  cases {\n    case match `==> p`:\n      closeAxiom;\n  }\n");
  EXPECT_FALSE(s.usedFallbackPattern());
  EXPECT_EQ(s.mode(), Mode::Finished);
  EXPECT_TRUE(s.state().tree.isClosed());
  EXPECT_NE(s.scriptText().find(block + "}"), std::string::npos);
  EXPECT_EQ(s.digest(), finalDigest(problem, s.scriptText()));
}

TEST(Interactive, TwoGoalsGetTwoCases) {
  auto problem = sampleProblem("and.sqp");
  DebugSession s(problem, "script m() {\n  impRight;\n  andLeft;\n  andRight;\n}\n");
  s.continueRun();
  auto goals = s.state().goals();
  ASSERT_EQ(goals.size(), 2u);
  s.startInteractive(goals[1].node);
  s.applyInteractive(goals[1].node, "closeAxiom", logic::FormulaPosition{logic::Side::Succedent, 0, {}});
  s.applyInteractive(goals[0].node, "closeAxiom");
  const interp::ProofScriptState& base = *s.trace().back().after.state;
  std::string block = s.finishInteractive();
  auto file = kps::parseScript(s.scriptText());
  const kps::Statement& cases = file.scripts[0].body.back();
  ASSERT_EQ(cases.cases.size(), 2u);
  for (std::size_t k = 0; k < 2; ++k) {
    auto pattern = matcher::parsePattern(cases.cases[k].pattern);
    EXPECT_FALSE(matcher::matchSequent(pattern, base.tree.node(goals[k].node).sequent).empty());
    EXPECT_TRUE(matcher::matchSequent(pattern, base.tree.node(goals[1 - k].node).sequent).empty());
  }
  EXPECT_NE(block.find("occ=\"succ:0\""), std::string::npos);
  EXPECT_TRUE(s.state().tree.isClosed());
  EXPECT_EQ(s.digest(), finalDigest(problem, s.scriptText()));
}

TEST(Interactive, OutOfOrderWorkNestsCases) {
  auto problem = sampleProblem("and.sqp");
  DebugSession s(problem, "script m() {\n  impRight;\n}\n");
  s.continueRun();
  const NodeId g = s.state().goals()[0].node;
  s.startInteractive(g);
  s.applyInteractive(g, "andLeft");
  s.applyInteractive(s.state().goals()[0].node, "andRight");
  auto kids = s.state().goals();
  ASSERT_EQ(kids.size(), 2u);
  s.applyInteractive(kids[1].node, "closeAxiom");
  s.applyInteractive(kids[0].node, "closeAxiom");
  std::string block = s.finishInteractive();
  EXPECT_NE(block.find("      cases {\n"), std::string::npos) << block;
  EXPECT_TRUE(s.state().tree.isClosed()) << s.scriptText();
  EXPECT_EQ(s.digest(), finalDigest(problem, s.scriptText()));
}

TEST(Interactive, CancelRestores) {
  DebugSession s(sampleProblem("and.sqp"), "script m() {\n  impRight;\n}\n");
  s.continueRun();
  const std::string before = s.digest();
  s.startInteractive(s.state().goals()[0].node);
  s.applyInteractive(s.state().goals()[0].node, "auto");
  s.cancelInteractive();
  EXPECT_EQ(s.digest(), before);
  EXPECT_EQ(errorOf([&] { s.startInteractive(0); }), ErrorCode::NotALeaf);
}

// --- properties ---------------------------------------------------------------

TEST(DebuggerProperties, TimeTravelSoundness) {
  std::mt19937 rng(97);
  const std::pair<const char*, const char*> bundled[] = {{"exists.sqp", "exists.kps"}, {"and.sqp", "and_comm.kps"}};
  for (int walk = 0; walk < 100; ++walk) {
    auto [prob, scr] = bundled[walk % 2];
    DebugSession s(sampleProblem(prob), readSample(scr));
    std::vector<std::string> path{s.digest()};  // digest at each trace length
    int ops = std::uniform_int_distribution<int>(1, 200)(rng);
    for (int i = 0; i < ops; ++i) {
      int op = std::uniform_int_distribution<int>(0, 3)(rng);
      try {
        switch (op) {
          case 0: s.stepOver(); break;
          case 1: s.stepInto(); break;
          case 2: s.stepBack(); break;
          case 3: s.stepIntoReverse(); break;
        }
      } catch (const Error& e) {
        ASSERT_TRUE(e.code() == ErrorCode::Finished || e.code() == ErrorCode::AtStartOfTrace) << e.what();
      }
      const std::size_t t = s.trace().size();
      ASSERT_LE(t, path.size() + 64);
      if (t < path.size()) {
        ASSERT_EQ(s.digest(), path[t]) << "walk " << walk << " op " << i;
      } else {
        for (std::size_t k = path.size(); k <= t; ++k) {
          ASSERT_EQ(s.trace()[k - 1].before.digest, path[k - 1]);
          path.push_back(k == t ? s.digest() : s.trace()[k].before.digest);
        }
      }
      for (std::size_t k = 0; k < t; ++k) {
        ASSERT_EQ(s.trace()[k].before.digest, path[k]);
        ASSERT_EQ(s.trace()[k].after.digest, path[k + 1]);
      }
    }
  }
}

TEST(DebuggerProperties, BreakpointBeforeSemantics) {
  for (auto [prob, scr] : {std::pair{"exists.sqp", "exists.kps"}, std::pair{"and.sqp", "and_comm.kps"}}) {
    DebugSession probe(sampleProblem(prob), readSample(scr));
    std::set<int> lines;
    for (const kps::Statement* st : probe.state().file->allStatements()) lines.insert(st->span.beginLine);
    for (int line : lines) {
      DebugSession s(sampleProblem(prob), readSample(scr));
      s.setBreakpoint(line);
      s.stepInto();  // so the first statement is eligible too
      s.stepIntoReverse();
      s.continueRun();
      while (s.hitBreakpoint()) {
        const kps::Statement* st = s.state().currentStatement();
        ASSERT_EQ(st->span.beginLine, line);
        ASSERT_EQ(s.state().pc.phase, interp::Phase::Enter);
        if (!s.trace().empty()) ASSERT_EQ(s.trace().back().after.digest, s.digest());
        s.continueRun();
      }
      EXPECT_EQ(s.mode(), Mode::Finished);
    }
  }
}

TEST(DebuggerProperties, InteractivePersistenceRoundTrip) {
  const char* problems[] = {
      "pred p; pred q; pred r; assume p | q; conjecture (p -> r) & (q -> r) & r | p | q;",
      "pred p; pred q; conjecture p & q -> q & p;",
      "pred p; pred q; pred r; conjecture (p -> q) -> (q -> r) -> p -> r;",
      "pred p; pred q; conjecture (p | q) & (q | !p) & (p -> p);",
      "pred p; pred q; pred r; conjecture (p & q | r) -> (p | r) & (q | r);",
  };
  const char* prefixes[] = {"", "impRight;", "simplify;", "andRight;", "impRight; andRight;"};
  std::mt19937 rng(5);
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  int checked = 0;
  for (int round = 0; round < 500; ++round) {
    auto problem = logic::parseProblem(problems[pick(5)]);
    std::string text = std::string("script m() {\n  ") + prefixes[pick(5)] + "\n  tryclose;\n}\n";
    DebugSession s(problem, text);
    s.continueRun();
    if (s.lastError() || s.state().openGoalCount() == 0) continue;
    auto entry = s.state().goals();
    s.startInteractive(entry[pick(entry.size())].node);
    for (int k = 0, n = 1 + static_cast<int>(pick(6)); k < n; ++k) {
      auto open = s.state().goals();
      if (open.empty()) break;
      NodeId g = open[pick(open.size())].node;
      auto rules = calculus::applicableRules(s.state().tree, g, std::nullopt);
      std::vector<std::string> names;
      for (const auto& r : rules)
        if (r.requiredArguments.empty()) names.push_back(r.name);
      if (names.empty()) continue;
      std::string rule = names[pick(names.size())];
      auto positions = calculus::eligiblePositions(rule, s.state().tree.node(g).sequent);
      std::optional<logic::FormulaPosition> pos;
      if (!positions.empty() && pick(2)) pos = positions[pick(positions.size())];
      s.applyInteractive(g, rule, pos);
    }
    std::multiset<std::string> expected;
    for (const auto& g : s.state().goals()) expected.insert(logic::toString(s.state().tree.node(g.node).sequent));
    const bool touched = !s.recordedInteractive().empty();
    s.finishInteractive();
    ASSERT_EQ(s.digest(), finalDigest(problem, s.scriptText())) << s.scriptText();
    if (touched && !s.usedFallbackPattern()) {
      std::multiset<std::string> got;
      for (const auto& g : s.state().goals()) got.insert(logic::toString(s.state().tree.node(g.node).sequent));
      ASSERT_EQ(got, expected) << s.scriptText();
      ++checked;
    }
  }
  EXPECT_GT(checked, 100);
}

}  // namespace
