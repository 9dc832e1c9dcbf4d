#include "psdbg/calculus/rules.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "psdbg/error.hpp"
#include "psdbg/logic/substitution.hpp"

namespace psdbg::calculus {

using logic::Formula;
using logic::FormulaPosition;
using logic::Sequent;
using logic::Side;
using logic::Term;
using FK = Formula::Kind;

namespace {

[[noreturn]] void notApplicable(std::string_view rule, const std::string& reason) {
  throw Error(ErrorCode::NotApplicable, std::string(rule) + ": " + reason);
}

bool contains(const std::vector<Formula>& list, const Formula& f) {
  return std::find(list.begin(), list.end(), f) != list.end();
}

/// Shape requirement of a rule on its principal formula.
struct Shape {
  Side side;
  std::function<bool(const Formula&, const Sequent&)> matches;
};

bool isKind(const Formula& f, FK kind) { return f.kind() == kind; }

const std::map<std::string, Shape, std::less<>>& shapes() {
  static const std::map<std::string, Shape, std::less<>> table = [] {
    std::map<std::string, Shape, std::less<>> t;
    auto kindIs = [](FK kind) {
      return [kind](const Formula& f, const Sequent&) { return isKind(f, kind); };
    };
    t["closeAxiom"] = {Side::Antecedent,
                       [](const Formula& f, const Sequent& s) { return contains(s.succedent, f); }};
    t["closeTrue"] = {Side::Succedent, kindIs(FK::True)};
    t["closeFalse"] = {Side::Antecedent, kindIs(FK::False)};
    t["eqClose"] = {Side::Succedent, [](const Formula& f, const Sequent&) {
                      return f.kind() == FK::Equality && f.terms()[0] == f.terms()[1];
                    }};
    t["notLeft"] = {Side::Antecedent, kindIs(FK::Not)};
    t["notRight"] = {Side::Succedent, kindIs(FK::Not)};
    t["andLeft"] = {Side::Antecedent, kindIs(FK::And)};
    t["andRight"] = {Side::Succedent, kindIs(FK::And)};
    t["orLeft"] = {Side::Antecedent, kindIs(FK::Or)};
    t["orRight"] = {Side::Succedent, kindIs(FK::Or)};
    t["impLeft"] = {Side::Antecedent, kindIs(FK::Implies)};
    t["impRight"] = {Side::Succedent, kindIs(FK::Implies)};
    t["allLeft"] = {Side::Antecedent, kindIs(FK::Forall)};
    t["allRight"] = {Side::Succedent, kindIs(FK::Forall)};
    t["exLeft"] = {Side::Antecedent, kindIs(FK::Exists)};
    t["exRight"] = {Side::Succedent, kindIs(FK::Exists)};
    t["applyEq"] = {Side::Antecedent, [](const Formula& f, const Sequent&) {
                      return f.kind() == FK::Equality && !(f.terms()[0] == f.terms()[1]);
                    }};
    return t;
  }();
  return table;
}

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Sequent withReplaced(const Sequent& s, Side side, std::size_t index, std::vector<Formula> with) {
  Sequent out = s;
  auto& list = out.side(side);
  list.erase(list.begin() + static_cast<std::ptrdiff_t>(index));
  list.insert(list.begin() + static_cast<std::ptrdiff_t>(index), with.begin(), with.end());
  return out;
}

template <typename T>
const T& argument(const RuleApplication& app, const std::string& name, std::string_view what) {
  auto it = app.arguments.find(name);
  if (it == app.arguments.end()) {
    throw Error(ErrorCode::MissingArgument, app.ruleName + " requires argument '" + name + "'");
  }
  const T* value = std::get_if<T>(&it->second);
  if (!value) {
    throw Error(ErrorCode::TypeError,
                app.ruleName + ": argument '" + name + "' must be " + std::string(what));
  }
  return *value;
}

const Term& witnessArgument(const RuleApplication& app) {
  const Term& t = argument<Term>(app, "with", "a term");
  if (!t.isGround()) notApplicable(app.ruleName, "witness " + logic::toString(t) + " is not ground");
  return t;
}

// Occurrences of `lhs` inside the sequent, skipping the equation itself.
std::vector<FormulaPosition> occurrences(const Sequent& s, const Term& lhs, std::size_t skipAnte) {
  std::vector<FormulaPosition> out;
  for (const FormulaPosition& pos : logic::enumeratePositions(s)) {
    if (pos.innerPath.empty()) continue;
    if (pos.side == Side::Antecedent && pos.index == skipAnte) continue;
    auto sub = logic::resolve(s, pos);
    if (const Term* t = std::get_if<Term>(&sub); t && *t == lhs) out.push_back(pos);
  }
  return out;
}

std::vector<NodeId> applyEq(ProofTree& tree, NodeId id, RuleApplication app) {
  const Sequent& s = tree.node(id).sequent;
  std::optional<std::size_t> eqIndex;
  if (app.arguments.count("eq")) {
    auto idx = argument<std::int64_t>(app, "eq", "an antecedent index");
    if (idx < 0 || static_cast<std::size_t>(idx) >= s.antecedent.size()) {
      notApplicable("applyEq", "antecedent index " + std::to_string(idx) + " out of range");
    }
    eqIndex = static_cast<std::size_t>(idx);
  }
  auto isEquation = [&](std::size_t i) {
    const Formula& f = s.antecedent[i];
    return f.kind() == FK::Equality && !(f.terms()[0] == f.terms()[1]);
  };
  std::optional<FormulaPosition> target = app.position;
  if (target) {
    auto sub = logic::resolve(s, *target);
    const Term* t = std::get_if<Term>(&sub);
    if (!t) notApplicable("applyEq", "position " + logic::toString(*target) + " is not a term");
    if (!eqIndex) {
      for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
        if (isEquation(i) && s.antecedent[i].terms()[0] == *t &&
            !(target->side == Side::Antecedent && target->index == i)) {
          eqIndex = i;
          break;
        }
      }
      if (!eqIndex) notApplicable("applyEq", "no equation rewrites " + logic::toString(*t));
    }
    if (!isEquation(*eqIndex) || !(s.antecedent[*eqIndex].terms()[0] == *t)) {
      notApplicable("applyEq", "equation does not match the term at " + logic::toString(*target));
    }
    if (target->side == Side::Antecedent && target->index == *eqIndex) {
      notApplicable("applyEq", "cannot rewrite inside the equation itself");
    }
  } else {
    for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
      if (eqIndex && *eqIndex != i) continue;
      if (!isEquation(i)) continue;
      auto occ = occurrences(s, s.antecedent[i].terms()[0], i);
      if (!occ.empty()) {
        eqIndex = i;
        target = occ.front();
        break;
      }
    }
    if (!target) notApplicable("applyEq", "no rewritable occurrence");
  }
  const Formula& eq = s.antecedent[*eqIndex];
  Formula rewritten =
      logic::replaceTerm(s.side(target->side)[target->index], target->innerPath, eq.terms()[1]);
  Sequent child = withReplaced(s, target->side, target->index, {rewritten});
  app.position = target;
  app.arguments.insert_or_assign("eq", static_cast<std::int64_t>(*eqIndex));
  return tree.expand(id, std::move(app), {Premise{std::move(child), std::nullopt}});
}

std::vector<NodeId> applyCut(ProofTree& tree, NodeId id, RuleApplication app) {
  const Formula& c = argument<Formula>(app, "formula", "a formula");
  if (!logic::isClosed(c)) notApplicable("cut", "cut formula must be closed");
  const Sequent& s = tree.node(id).sequent;
  Sequent show = s;
  show.succedent.push_back(c);
  Sequent use = s;
  use.antecedent.push_back(c);
  app.position.reset();
  return tree.expand(id, std::move(app),
                     {Premise{std::move(show), "show"}, Premise{std::move(use), "use"}});
}

}  // namespace

const std::vector<std::string>& ruleNames() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, shape] : shapes()) n.push_back(name);
    n.push_back("cut");
    std::sort(n.begin(), n.end());
    return n;
  }();
  return names;
}

bool isRule(std::string_view name) {
  return std::find(ruleNames().begin(), ruleNames().end(), name) != ruleNames().end();
}

std::vector<std::string> requiredArguments(std::string_view rule) {
  if (rule == "allLeft" || rule == "exRight") return {"with"};
  if (rule == "cut") return {"formula"};
  if (rule == "applyEq") return {"eq"};
  return {};
}

std::vector<FormulaPosition> eligiblePositions(std::string_view rule, const Sequent& s) {
  std::vector<FormulaPosition> out;
  auto it = shapes().find(rule);
  if (it == shapes().end()) return out;
  const Shape& shape = it->second;
  const auto& list = s.side(shape.side);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!shape.matches(list[i], s)) continue;
    if (rule == "applyEq" && occurrences(s, list[i].terms()[0], i).empty()) continue;
    out.push_back(FormulaPosition{shape.side, i, {}});
  }
  return out;
}

std::vector<NodeId> applyRule(ProofTree& tree, NodeId id, const RuleApplication& input) {
  tree.requireOpenLeaf(id);
  RuleApplication app = input;
  app.producedNodes.clear();
  const std::string& rule = app.ruleName;
  if (rule == "cut") return applyCut(tree, id, std::move(app));
  if (rule == "applyEq") return applyEq(tree, id, std::move(app));
  auto shapeIt = shapes().find(rule);
  if (shapeIt == shapes().end()) {
    throw Error(ErrorCode::UnknownCommand, "unknown rule '" + rule + "'");
  }
  const Shape& shape = shapeIt->second;
  const Sequent& s = tree.node(id).sequent;

  std::size_t index = 0;
  Side side = shape.side;
  if (app.position) {
    const FormulaPosition& pos = *app.position;
    if (!pos.innerPath.empty()) notApplicable(rule, "rule acts on whole formulas only");
    const auto& list = s.side(pos.side);
    if (pos.index >= list.size()) {
      throw Error(ErrorCode::InvalidPosition, "position " + logic::toString(pos) + " out of range");
    }
    if (rule == "closeAxiom") {
      const auto& other = s.side(pos.side == Side::Antecedent ? Side::Succedent : Side::Antecedent);
      if (!contains(other, list[pos.index])) {
        notApplicable(rule, logic::toString(list[pos.index]) + " does not occur on the other side");
      }
      return tree.expand(id, std::move(app), {});
    }
    if (pos.side != shape.side || !shape.matches(list[pos.index], s)) {
      notApplicable(rule, "formula at " + logic::toString(pos) + " has the wrong shape");
    }
    index = pos.index;
    side = pos.side;
  } else {
    auto eligible = eligiblePositions(rule, s);
    if (eligible.empty()) notApplicable(rule, "no eligible formula in " + logic::toString(s));
    index = eligible.front().index;
    app.position = eligible.front();
  }

  const Formula principal = s.side(side)[index];
  auto removed = [&] {
    Sequent out = s;
    auto& list = out.side(side);
    list.erase(list.begin() + static_cast<std::ptrdiff_t>(index));
    return out;
  };

  if (rule == "closeAxiom" || rule == "closeTrue" || rule == "closeFalse" || rule == "eqClose") {
    return tree.expand(id, std::move(app), {});
  }
  if (rule == "notLeft") {
    Sequent c = removed();
    c.succedent.push_back(principal.body());
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  if (rule == "notRight") {
    Sequent c = removed();
    c.antecedent.push_back(principal.body());
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  if (rule == "andLeft" || rule == "orRight") {
    Sequent c = withReplaced(s, side, index, {principal.left(), principal.right()});
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  if (rule == "impRight") {
    Sequent c = withReplaced(s, side, index, {principal.right()});
    c.antecedent.push_back(principal.left());
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  if (rule == "andRight" || rule == "orLeft") {
    const bool conj = rule == "andRight";
    return tree.expand(
        id, std::move(app),
        {Premise{withReplaced(s, side, index, {principal.left()}),
                 conj ? "left conjunct" : "left disjunct"},
         Premise{withReplaced(s, side, index, {principal.right()}),
                 conj ? "right conjunct" : "right disjunct"}});
  }
  if (rule == "impLeft") {
    Sequent first = removed();
    first.succedent.push_back(principal.left());
    Sequent second = withReplaced(s, side, index, {principal.right()});
    return tree.expand(id, std::move(app),
                       {Premise{std::move(first), "antecedent"},
                        Premise{std::move(second), "consequent"}});
  }
  if (rule == "allRight" || rule == "exLeft") {
    std::string fresh = logic::freshConstant(tree.signature(), lowercase(principal.name()));
    Formula instance = logic::substitute(principal.body(), principal.name(), Term::constant(fresh));
    Sequent c = withReplaced(s, side, index, {instance});
    app.arguments.insert_or_assign("with", Term::constant(fresh));
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  if (rule == "allLeft" || rule == "exRight") {
    const Term& witness = witnessArgument(app);
    Formula instance = logic::substitute(principal.body(), principal.name(), witness);
    Sequent c = s;
    c.side(side).push_back(instance);
    return tree.expand(id, std::move(app), {Premise{std::move(c), std::nullopt}});
  }
  notApplicable(rule, "unhandled rule");
}

NodeId instantiate(ProofTree& tree, NodeId id, const std::string& var, const Term& witness) {
  tree.requireOpenLeaf(id);
  if (!witness.isGround()) {
    notApplicable("instantiate", "witness " + logic::toString(witness) + " is not ground");
  }
  const Sequent& s = tree.node(id).sequent;
  std::vector<FormulaPosition> candidates;
  for (std::size_t i = 0; i < s.antecedent.size(); ++i) {
    if (s.antecedent[i].kind() == FK::Forall && s.antecedent[i].name() == var) {
      candidates.push_back({Side::Antecedent, i, {}});
    }
  }
  for (std::size_t i = 0; i < s.succedent.size(); ++i) {
    if (s.succedent[i].kind() == FK::Exists && s.succedent[i].name() == var) {
      candidates.push_back({Side::Succedent, i, {}});
    }
  }
  if (candidates.empty()) {
    throw Error(ErrorCode::NoSuchQuantifier, "no top-level quantifier binds '" + var + "'");
  }
  if (candidates.size() > 1) {
    throw Error(ErrorCode::AmbiguousQuantifier,
                std::to_string(candidates.size()) + " top-level quantifiers bind '" + var + "'");
  }
  const FormulaPosition& pos = candidates.front();
  const Formula& q = s.side(pos.side)[pos.index];
  Sequent child = withReplaced(s, pos.side, pos.index, {logic::substitute(q.body(), var, witness)});
  RuleApplication app;
  app.ruleName = "instantiate";
  app.position = pos;
  app.arguments.insert_or_assign("var", var);
  app.arguments.insert_or_assign("with", witness);
  return tree.expand(id, std::move(app), {Premise{std::move(child), std::nullopt}}).front();
}

std::vector<RuleInfo> applicableRules(const ProofTree& tree, NodeId id,
                                      const std::optional<FormulaPosition>& position) {
  const ProofNode& n = tree.node(id);
  if (!n.isOpenLeaf()) {
    throw Error(ErrorCode::NotALeaf, "node " + std::to_string(id) + " is not an open leaf");
  }
  const Sequent& s = n.sequent;
  if (position) logic::resolve(s, *position);
  std::vector<RuleInfo> out;
  for (const std::string& rule : ruleNames()) {
    bool ok = false;
    if (rule == "cut") {
      ok = true;
    } else if (rule == "applyEq" && position) {
      auto sub = logic::resolve(s, *position);
      if (const Term* t = std::get_if<Term>(&sub)) {
        for (std::size_t i = 0; i < s.antecedent.size() && !ok; ++i) {
          const Formula& f = s.antecedent[i];
          ok = f.kind() == FK::Equality && f.terms()[0] == *t && !(f.terms()[1] == *t) &&
               !(position->side == Side::Antecedent && position->index == i);
        }
      }
    } else if (rule == "closeAxiom" && position) {
      if (position->innerPath.empty()) {
        const auto& other =
            s.side(position->side == Side::Antecedent ? Side::Succedent : Side::Antecedent);
        ok = contains(other, s.side(position->side)[position->index]);
      }
    } else {
      auto eligible = eligiblePositions(rule, s);
      ok = position ? std::find(eligible.begin(), eligible.end(), *position) != eligible.end()
                    : !eligible.empty();
    }
    if (ok) out.push_back(RuleInfo{rule, requiredArguments(rule)});
  }
  return out;
}

}  // namespace psdbg::calculus
