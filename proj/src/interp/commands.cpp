#include "psdbg/calculus/rules.hpp"
#include "psdbg/calculus/strategy.hpp"
#include "psdbg/interp/interpreter.hpp"
#include "psdbg/logic/parser.hpp"
#include "psdbg/matcher/matcher.hpp"

namespace psdbg::interp {

namespace {

using logic::FormulaPosition;

const Value* findArg(const CommandContext& cc, std::string_view name) {
  auto it = cc.args.find(name);
  return it == cc.args.end() ? nullptr : &it->second;
}

[[noreturn]] void badArg(std::string_view name, const std::string& expected, const Value& got) {
  throw Error(ErrorCode::TypeError,
              "argument '" + std::string(name) + "' expects " + expected + ", got " + typeName(got));
}

logic::Term termArg(const CommandContext& cc, std::string_view name) {
  const Value& v = *findArg(cc, name);
  if (auto* t = std::get_if<logic::Term>(&v)) return *t;
  if (auto* s = std::get_if<std::string>(&v)) return logic::parseTerm(*s, cc.tree.signature());
  badArg(name, "a term", v);
}

logic::Formula formulaArg(const CommandContext& cc, std::string_view name) {
  const Value& v = *findArg(cc, name);
  if (auto* f = std::get_if<logic::Formula>(&v)) return *f;
  if (auto* s = std::get_if<std::string>(&v)) return logic::parseFormula(*s, cc.tree.signature());
  badArg(name, "a formula", v);
}

/// Position from `occ="ante:0"` or `on=<formula or one-formula pattern>`.
std::optional<FormulaPosition> positionArg(const CommandContext& cc) {
  const Value* occ = findArg(cc, "occ");
  const Value* on = findArg(cc, "on");
  if (occ && on) throw Error(ErrorCode::InvalidPosition, "give either occ= or on=, not both");
  if (occ) {
    auto* text = std::get_if<std::string>(occ);
    if (!text) badArg("occ", "a position string such as \"ante:0\"", *occ);
    return logic::parsePosition(*text);
  }
  if (!on) return std::nullopt;
  const logic::Sequent& s = cc.tree.node(cc.goal).sequent;
  std::vector<FormulaPosition> hits;
  if (auto* f = std::get_if<logic::Formula>(on)) {
    for (logic::Side side : {logic::Side::Antecedent, logic::Side::Succedent})
      for (std::size_t i = 0; i < s.side(side).size(); ++i)
        if (s.side(side)[i] == *f) hits.push_back(FormulaPosition{side, i, {}});
  } else if (auto* p = std::get_if<PatternValue>(on)) {
    if (p->pattern.size() != 1) {
      throw Error(ErrorCode::InvalidPosition, "on= pattern must contain exactly one formula pattern");
    }
    for (const matcher::Match& m : matcher::matchSequent(p->pattern, s).matches)
      if (std::find(hits.begin(), hits.end(), m.assignment[0]) == hits.end()) hits.push_back(m.assignment[0]);
  } else {
    badArg("on", "a formula or a pattern", *on);
  }
  if (hits.size() != 1) {
    throw Error(ErrorCode::InvalidPosition,
                "on= selects " + std::to_string(hits.size()) + " formula occurrences, expected exactly one");
  }
  return hits.front();
}

CommandHandler ruleHandler(const std::string& rule) {
  return CommandHandler{rule, calculus::requiredArguments(rule), [rule](CommandContext& cc) {
                          calculus::RuleApplication app{rule, positionArg(cc), {}, {}};
                          if (findArg(cc, "with")) app.arguments.insert_or_assign("with", termArg(cc, "with"));
                          if (findArg(cc, "formula")) {
                            app.arguments.insert_or_assign("formula", formulaArg(cc, "formula"));
                          }
                          if (const Value* eq = findArg(cc, "eq")) {
                            auto* i = std::get_if<std::int64_t>(eq);
                            if (!i) badArg("eq", "an antecedent index", *eq);
                            app.arguments.insert_or_assign("eq", *i);
                          }
                          calculus::applyRule(cc.tree, cc.goal, app);
                          return CommandOutcome{};
                        }};
}

int clampInt(std::int64_t v) { return static_cast<int>(std::min<std::int64_t>(v, 1 << 30)); }

}  // namespace

CommandRegistry CommandRegistry::standard() {
  CommandRegistry r;
  for (const std::string& rule : calculus::ruleNames()) r.add(ruleHandler(rule));
  r.add(CommandHandler{"instantiate", {"var", "with"}, [](CommandContext& cc) {
                         const Value& var = *findArg(cc, "var");
                         std::string name;
                         if (auto* t = std::get_if<logic::Term>(&var); t && t->isVariable()) {
                           name = t->name();
                         } else if (auto* s = std::get_if<std::string>(&var)) {
                           name = *s;
                         } else {
                           badArg("var", "a variable name", var);
                         }
                         calculus::instantiate(cc.tree, cc.goal, name, termArg(cc, "with"));
                         return CommandOutcome{};
                       }});
  r.add(CommandHandler{"auto", {}, [](CommandContext& cc) {
                         calculus::autoStrategy(cc.tree, cc.goal, clampInt(cc.maxSteps), clampInt(cc.instLimit));
                         return CommandOutcome{true, cc.goal};
                       }});
  r.add(CommandHandler{"tryclose", {}, [](CommandContext& cc) {
                         calculus::tryClose(cc.tree, cc.goal, clampInt(cc.maxSteps), clampInt(cc.instLimit));
                         return CommandOutcome{true, cc.goal};
                       }});
  r.add(CommandHandler{"simplify", {}, [](CommandContext& cc) {
                         calculus::simplify(cc.tree, cc.goal, clampInt(cc.maxSteps));
                         return CommandOutcome{true, cc.goal};
                       }});
  return r;
}

}  // namespace psdbg::interp
