#pragma once

// Random generators shared by the property tests. Everything is driven by
// an explicit std::mt19937 so failures reproduce from the seed.

#include <random>
#include <string>
#include <vector>

#include "psdbg/logic/signature.hpp"
#include "psdbg/logic/syntax.hpp"
#include "psdbg/matcher/pattern.hpp"

namespace psdbg::testkit {

/// Signature used by the generators: constants a b c, functions f/1 g/2,
/// predicates p/0 q/1 r/2.
inline logic::Signature generatorSignature() {
  logic::Signature sig;
  sig.declareConstant("a");
  sig.declareConstant("b");
  sig.declareConstant("c");
  sig.declareFunction("f", 1);
  sig.declareFunction("g", 2);
  sig.declarePredicate("p", 0);
  sig.declarePredicate("q", 1);
  sig.declarePredicate("r", 2);
  return sig;
}

class FormulaGenerator {
 public:
  explicit FormulaGenerator(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  logic::Term term(int depth, const std::vector<std::string>& vars) {
    int choice = pick(depth <= 0 ? 2 : 4);
    if (choice == 0 && !vars.empty()) return logic::Term::variable(vars[pick(static_cast<int>(vars.size()))]);
    if (choice <= 1) {
      static const char* consts[] = {"a", "b", "c"};
      return logic::Term::constant(consts[pick(3)]);
    }
    if (choice == 2) return logic::Term::application("f", {term(depth - 1, vars)});
    return logic::Term::application("g", {term(depth - 1, vars), term(depth - 1, vars)});
  }

  /// Closed formula when `vars` is empty and `freeVars` is empty.
  logic::Formula formula(int depth, std::vector<std::string> vars = {}) {
    int choice = pick(depth <= 0 ? 5 : 12);
    switch (choice) {
      case 0: return logic::Formula::atom("p");
      case 1: return logic::Formula::atom("q", {term(1, vars)});
      case 2: return logic::Formula::atom("r", {term(1, vars), term(1, vars)});
      case 3: return logic::Formula::equality(term(1, vars), term(1, vars));
      case 4: return pick(2) ? logic::Formula::truth() : logic::Formula::falsity();
      case 5:
      case 6: return logic::Formula::negation(formula(depth - 1, vars));
      case 7: return logic::Formula::conjunction(formula(depth - 1, vars), formula(depth - 1, vars));
      case 8: return logic::Formula::disjunction(formula(depth - 1, vars), formula(depth - 1, vars));
      case 9: return logic::Formula::implication(formula(depth - 1, vars), formula(depth - 1, vars));
      default: {
        static const char* names[] = {"X", "Y", "Z"};
        std::string v = names[pick(3)];
        vars.push_back(v);
        logic::Formula body = formula(depth - 1, vars);
        return choice == 10 ? logic::Formula::forall(v, body) : logic::Formula::exists(v, body);
      }
    }
  }

 private:
  std::mt19937 rng_;
};


/// Turns a formula into a pattern by replacing random subterms and
/// subformulas with wildcards or schema variables. Term schema variables
/// are T1/T2 and formula ones F1/F2, so kinds never clash.
class PatternAbstractor {
 public:
  explicit PatternAbstractor(FormulaGenerator& gen) : gen_(gen) {}

  matcher::FormulaPattern formula(const logic::Formula& f) {
    using K = matcher::FormulaPattern::Kind;
    int roll = gen_.pick(12);
    matcher::FormulaPattern p;
    if (roll == 0) return p;
    if (roll == 1) {
      p.kind = K::SchemaVar;
      p.name = gen_.pick(2) ? "F1" : "F2";
      return p;
    }
    p = matcher::FormulaPattern::from(f);
    p.terms.clear();
    p.children.clear();
    if (f.isQuantifier()) {
      int b = gen_.pick(4);
      if (b == 0) p.binder = matcher::FormulaPattern::Binder::Wildcard;
      if (b == 1) {
        p.binder = matcher::FormulaPattern::Binder::SchemaVar;
        p.name = gen_.pick(2) ? "T1" : "T2";
      }
    }
    for (const auto& t : f.terms()) p.terms.push_back(term(t));
    for (const auto& c : f.children()) p.children.push_back(formula(c));
    return p;
  }

  matcher::TermPattern term(const logic::Term& t) {
    int roll = gen_.pick(6);
    matcher::TermPattern p;
    if (roll == 0) return p;
    if (roll == 1) {
      p.kind = matcher::TermPattern::Kind::SchemaVar;
      p.name = gen_.pick(2) ? "T1" : "T2";
      return p;
    }
    p = matcher::TermPattern::from(t);
    p.args.clear();
    for (const auto& a : t.args()) p.args.push_back(term(a));
    return p;
  }

  /// Fills in schemaVars from the pattern's contents.
  static void indexSchemaVars(matcher::SequentPattern& sp) {
    for (const auto* side : {&sp.antecedent, &sp.succedent})
      for (const auto& f : *side) collect(f, sp);
  }

 private:
  static void collect(const matcher::TermPattern& t, matcher::SequentPattern& sp) {
    if (t.kind == matcher::TermPattern::Kind::SchemaVar) sp.schemaVars[t.name] = matcher::SchemaKind::Term;
    for (const auto& a : t.args) collect(a, sp);
  }
  static void collect(const matcher::FormulaPattern& f, matcher::SequentPattern& sp) {
    if (f.kind == matcher::FormulaPattern::Kind::SchemaVar) sp.schemaVars[f.name] = matcher::SchemaKind::Formula;
    if (f.binder == matcher::FormulaPattern::Binder::SchemaVar &&
        (f.kind == matcher::FormulaPattern::Kind::Forall || f.kind == matcher::FormulaPattern::Kind::Exists)) {
      sp.schemaVars[f.name] = matcher::SchemaKind::Term;
    }
    for (const auto& t : f.terms) collect(t, sp);
    for (const auto& c : f.children) collect(c, sp);
  }

  FormulaGenerator& gen_;
};

/// A random sequent of at most `maxFormulas` formulas and a pattern of at
/// most `maxPatterns` formula patterns, mostly abstracted from the sequent.
inline std::pair<matcher::SequentPattern, logic::Sequent> randomMatchCase(FormulaGenerator& gen, int maxFormulas = 6,
                                                                          int maxPatterns = 4) {
  logic::Sequent s;
  int total = gen.pick(maxFormulas + 1);
  for (int i = 0; i < total; ++i) (gen.pick(2) ? s.antecedent : s.succedent).push_back(gen.formula(2));
  matcher::SequentPattern p;
  PatternAbstractor abs(gen);
  int patterns = gen.pick(maxPatterns + 1);
  for (int i = 0; i < patterns; ++i) {
    bool ante = gen.pick(2);
    const auto& pool = ante ? s.antecedent : s.succedent;
    logic::Formula source = !pool.empty() && gen.pick(4) ? pool[gen.pick(static_cast<int>(pool.size()))] : gen.formula(2);
    (ante ? p.antecedent : p.succedent).push_back(abs.formula(source));
  }
  PatternAbstractor::indexSchemaVars(p);
  return {p, s};
}

}  // namespace psdbg::testkit
