#include "psdbg/logic/substitution.hpp"

#include <set>

namespace psdbg::logic {

Term substitute(const Term& t, const std::string& var, const Term& replacement) {
  switch (t.kind()) {
    case Term::Kind::Variable: return t.name() == var ? replacement : t;
    case Term::Kind::Constant: return t;
    case Term::Kind::Application: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      bool changed = false;
      for (const Term& a : t.args()) {
        args.push_back(substitute(a, var, replacement));
        changed = changed || !(args.back().identity() == a.identity());
      }
      return changed ? Term::application(t.name(), std::move(args)) : t;
    }
  }
  return t;
}

namespace {

std::string freshName(const std::string& base, const std::set<std::string>& taken) {
  for (int i = 1;; ++i) {
    std::string candidate = base + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::string& var, const Term& replacement) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Equality: {
      std::vector<Term> terms;
      terms.reserve(f.terms().size());
      for (const Term& t : f.terms()) terms.push_back(substitute(t, var, replacement));
      if (f.kind() == Formula::Kind::Equality) return Formula::equality(terms[0], terms[1]);
      return Formula::atom(f.name(), std::move(terms));
    }
    case Formula::Kind::Not: return Formula::negation(substitute(f.body(), var, replacement));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return Formula::binary(f.kind(), substitute(f.left(), var, replacement),
                             substitute(f.right(), var, replacement));
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      const std::string& bound = f.name();
      if (bound == var) return f;
      const auto bodyFree = freeVariables(f.body());
      if (!bodyFree.count(var)) return f;
      const auto replacementFree = freeVariables(replacement);
      if (!replacementFree.count(bound)) {
        return Formula::quantifier(f.kind(), bound, substitute(f.body(), var, replacement));
      }
      std::set<std::string> taken = allVariables(f.body());
      taken.insert(replacementFree.begin(), replacementFree.end());
      taken.insert(var);
      std::string renamed = freshName(bound, taken);
      Formula body = substitute(f.body(), bound, Term::variable(renamed));
      return Formula::quantifier(f.kind(), renamed, substitute(body, var, replacement));
    }
  }
  return f;
}

}  // namespace psdbg::logic
