#include "psdbg/matcher/matcher.hpp"

#include <algorithm>
#include <numeric>

namespace psdbg::matcher {

using logic::Formula;
using logic::FormulaPosition;
using logic::Sequent;
using logic::Side;
using logic::Term;

std::string toString(const BoundValue& v) {
  return std::visit([](const auto& x) { return logic::toString(x); }, v);
}

namespace {

bool bindValue(Binding& binding, const std::string& name, BoundValue value) {
  auto [it, inserted] = binding.emplace(name, value);
  return inserted || it->second == value;
}

bool matchTerm(const TermPattern& p, const Term& t, Binding& binding) {
  switch (p.kind) {
    case TermPattern::Kind::Wildcard: return true;
    case TermPattern::Kind::SchemaVar: return bindValue(binding, p.name, t);
    case TermPattern::Kind::Variable:
      return t.kind() == Term::Kind::Variable && t.name() == p.name;
    case TermPattern::Kind::Constant:
      return t.kind() == Term::Kind::Constant && t.name() == p.name;
    case TermPattern::Kind::Application:
      if (t.kind() != Term::Kind::Application || t.name() != p.name ||
          t.args().size() != p.args.size()) {
        return false;
      }
      for (std::size_t i = 0; i < p.args.size(); ++i)
        if (!matchTerm(p.args[i], t.args()[i], binding)) return false;
      return true;
  }
  return false;
}

bool sameShape(FormulaPattern::Kind pk, Formula::Kind fk) {
  using P = FormulaPattern::Kind;
  using F = Formula::Kind;
  switch (pk) {
    case P::Atom: return fk == F::Atom;
    case P::Equality: return fk == F::Equality;
    case P::True: return fk == F::True;
    case P::False: return fk == F::False;
    case P::Not: return fk == F::Not;
    case P::And: return fk == F::And;
    case P::Or: return fk == F::Or;
    case P::Implies: return fk == F::Implies;
    case P::Forall: return fk == F::Forall;
    case P::Exists: return fk == F::Exists;
    default: return false;
  }
}

Binding constraintsFor(const SequentPattern& p, const Binding& preBound) {
  Binding out;
  for (const auto& [name, value] : preBound) {
    auto it = p.schemaVars.find(name);
    if (it == p.schemaVars.end()) continue;
    bool isTerm = std::holds_alternative<Term>(value);
    if (isTerm == (it->second == SchemaKind::Term)) out.emplace(name, value);
  }
  return out;
}

class Search {
 public:
  Search(const SequentPattern& p, const Sequent& s, MatchResult& out) : p_(p), s_(s), out_(out) {
    for (const auto& fp : p.antecedent) items_.push_back({&fp, Side::Antecedent});
    for (const auto& fp : p.succedent) items_.push_back({&fp, Side::Succedent});
    usedAnte_.assign(s.antecedent.size(), false);
    usedSucc_.assign(s.succedent.size(), false);
  }

  void run(const Binding& binding) { step(0, binding); }

 private:
  struct Item {
    const FormulaPattern* pattern;
    Side side;
  };

  void step(std::size_t k, const Binding& binding) {
    if (k == items_.size()) {
      out_.matches.push_back(Match{binding, assignment_});
      return;
    }
    const Item& item = items_[k];
    const auto& formulas = s_.side(item.side);
    auto& used = item.side == Side::Antecedent ? usedAnte_ : usedSucc_;
    for (std::size_t i = 0; i < formulas.size(); ++i) {
      if (used[i]) continue;
      Binding extended = binding;
      if (!matchFormula(*item.pattern, formulas[i], extended)) continue;
      used[i] = true;
      assignment_.push_back(FormulaPosition{item.side, i, {}});
      step(k + 1, extended);
      assignment_.pop_back();
      used[i] = false;
    }
  }

  const SequentPattern& p_;
  const Sequent& s_;
  MatchResult& out_;
  std::vector<Item> items_;
  std::vector<bool> usedAnte_;
  std::vector<bool> usedSucc_;
  std::vector<FormulaPosition> assignment_;
};

// Oracle walker: collects every schema occurrence, then checks consistency.
using Occurrences = std::vector<std::pair<std::string, BoundValue>>;

bool collectTerm(const TermPattern& p, const Term& t, Occurrences& occ) {
  if (p.kind == TermPattern::Kind::Wildcard) return true;
  if (p.kind == TermPattern::Kind::SchemaVar) {
    occ.emplace_back(p.name, t);
    return true;
  }
  if (p.kind == TermPattern::Kind::Variable || p.kind == TermPattern::Kind::Constant) {
    auto want = p.kind == TermPattern::Kind::Variable ? Term::Kind::Variable : Term::Kind::Constant;
    return t.kind() == want && t.name() == p.name;
  }
  if (p.kind != TermPattern::Kind::Application || t.kind() != Term::Kind::Application) return false;
  if (p.name != t.name() || p.args.size() != t.args().size()) return false;
  bool ok = true;
  for (std::size_t i = 0; i < p.args.size(); ++i) ok = collectTerm(p.args[i], t.args()[i], occ) && ok;
  return ok;
}

bool collectFormula(const FormulaPattern& p, const Formula& f, Occurrences& occ) {
  using P = FormulaPattern::Kind;
  if (p.kind == P::Wildcard) return true;
  if (p.kind == P::SchemaVar) {
    occ.emplace_back(p.name, f);
    return true;
  }
  if (!sameShape(p.kind, f.kind())) return false;
  if (p.kind == P::Atom && p.name != f.name()) return false;
  if (p.kind == P::Forall || p.kind == P::Exists) {
    if (p.binder == FormulaPattern::Binder::Literal && p.name != f.name()) return false;
    if (p.binder == FormulaPattern::Binder::SchemaVar) occ.emplace_back(p.name, Term::variable(f.name()));
  }
  if (p.terms.size() != f.terms().size() || p.children.size() != f.children().size()) return false;
  bool ok = true;
  for (std::size_t i = 0; i < p.terms.size(); ++i) ok = collectTerm(p.terms[i], f.terms()[i], occ) && ok;
  for (std::size_t i = 0; i < p.children.size(); ++i)
    ok = collectFormula(p.children[i], f.children()[i], occ) && ok;
  return ok;
}

}  // namespace

bool matchFormula(const FormulaPattern& p, const Formula& f, Binding& binding) {
  using P = FormulaPattern::Kind;
  switch (p.kind) {
    case P::Wildcard: return true;
    case P::SchemaVar: return bindValue(binding, p.name, f);
    default: break;
  }
  if (!sameShape(p.kind, f.kind())) return false;
  switch (p.kind) {
    case P::Atom:
      if (p.name != f.name() || p.terms.size() != f.terms().size()) return false;
      [[fallthrough]];
    case P::Equality:
      for (std::size_t i = 0; i < p.terms.size(); ++i)
        if (!matchTerm(p.terms[i], f.terms()[i], binding)) return false;
      return true;
    case P::Forall:
    case P::Exists:
      if (p.binder == FormulaPattern::Binder::Literal && p.name != f.name()) return false;
      if (p.binder == FormulaPattern::Binder::SchemaVar &&
          !bindValue(binding, p.name, Term::variable(f.name()))) {
        return false;
      }
      return matchFormula(p.children[0], f.body(), binding);
    default:
      for (std::size_t i = 0; i < p.children.size(); ++i)
        if (!matchFormula(p.children[i], f.children()[i], binding)) return false;
      return true;
  }
}

MatchResult matchSequent(const SequentPattern& p, const Sequent& s, const Binding& preBound) {
  MatchResult out;
  Search(p, s, out).run(constraintsFor(p, preBound));
  return out;
}

MatchResult bruteForceMatch(const SequentPattern& p, const Sequent& s, const Binding& preBound) {
  MatchResult out;
  const std::size_t na = p.antecedent.size();
  const std::size_t n = p.size();
  auto sideOf = [&](std::size_t k) { return k < na ? Side::Antecedent : Side::Succedent; };
  auto patternAt = [&](std::size_t k) -> const FormulaPattern& {
    return k < na ? p.antecedent[k] : p.succedent[k - na];
  };
  for (std::size_t k = 0; k < n; ++k)
    if (s.side(sideOf(k)).empty()) return out;

  // Odometer over all index tuples; the last digit varies fastest, which
  // yields lexicographic order.
  std::vector<std::size_t> digits(n, 0);
  const Binding seed = constraintsFor(p, preBound);
  while (true) {
    bool injective = true;
    for (std::size_t i = 0; i < n && injective; ++i)
      for (std::size_t j = i + 1; j < n && injective; ++j)
        if (sideOf(i) == sideOf(j) && digits[i] == digits[j]) injective = false;
    if (injective) {
      Occurrences occ;
      bool ok = true;
      for (std::size_t k = 0; k < n && ok; ++k)
        ok = collectFormula(patternAt(k), s.side(sideOf(k))[digits[k]], occ);
      Binding binding = seed;
      for (std::size_t i = 0; i < occ.size() && ok; ++i) {
        auto it = binding.find(occ[i].first);
        if (it == binding.end()) {
          binding.emplace(occ[i].first, occ[i].second);
        } else {
          ok = it->second == occ[i].second;
        }
      }
      if (ok) {
        Match m{binding, {}};
        for (std::size_t k = 0; k < n; ++k) m.assignment.push_back(FormulaPosition{sideOf(k), digits[k], {}});
        out.matches.push_back(std::move(m));
      }
    }
    std::size_t k = n;
    while (k > 0) {
      --k;
      if (++digits[k] < s.side(sideOf(k)).size()) break;
      digits[k] = 0;
      if (k == 0) return out;
    }
    if (n == 0) return out;
  }
}

SequentPattern generateCasePattern(const Sequent& target, const std::vector<Sequent>& siblings) {
  struct Pick {
    Side side;
    std::size_t index;
    std::size_t size;
  };
  std::vector<Pick> succ;
  std::vector<Pick> ante;
  for (std::size_t i = 0; i < target.succedent.size(); ++i)
    succ.push_back({Side::Succedent, i, target.succedent[i].size()});
  for (std::size_t i = 0; i < target.antecedent.size(); ++i)
    ante.push_back({Side::Antecedent, i, target.antecedent[i].size()});
  auto bySize = [](const Pick& a, const Pick& b) { return a.size < b.size; };
  std::stable_sort(succ.begin(), succ.end(), bySize);
  std::stable_sort(ante.begin(), ante.end(), bySize);

  auto build = [&](const std::vector<Pick>& picks) {
    std::vector<Formula> a;
    std::vector<Formula> s;
    std::vector<Pick> sorted = picks;
    std::sort(sorted.begin(), sorted.end(), [](const Pick& x, const Pick& y) {
      return std::pair(x.side, x.index) < std::pair(y.side, y.index);
    });
    for (const Pick& p : sorted) (p.side == Side::Antecedent ? a : s).push_back(target.side(p.side)[p.index]);
    return exactPattern(a, s);
  };
  auto distinguishes = [&](const SequentPattern& p) {
    for (const Sequent& sib : siblings)
      if (!matchSequent(p, sib).empty()) return false;
    return !matchSequent(p, target).empty();
  };

  for (const auto* group : {&succ, &ante})
    for (const Pick& p : *group) {
      SequentPattern candidate = build({p});
      if (distinguishes(candidate)) return candidate;
    }

  // Larger subsets by cardinality, then total size, then position.
  std::vector<Pick> all = ante;
  all.insert(all.end(), succ.begin(), succ.end());
  std::sort(all.begin(), all.end(), [](const Pick& x, const Pick& y) {
    return std::pair(x.side, x.index) < std::pair(y.side, y.index);
  });
  const std::size_t n = all.size();
  if (n <= 16) {
    std::vector<std::vector<Pick>> subsets;
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) < 2) continue;
      std::vector<Pick> sub;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) sub.push_back(all[i]);
      subsets.push_back(std::move(sub));
    }
    auto total = [](const std::vector<Pick>& v) {
      return std::accumulate(v.begin(), v.end(), std::size_t{0},
                             [](std::size_t acc, const Pick& p) { return acc + p.size; });
    };
    std::stable_sort(subsets.begin(), subsets.end(), [&](const auto& x, const auto& y) {
      return std::pair(x.size(), total(x)) < std::pair(y.size(), total(y));
    });
    for (const auto& sub : subsets) {
      SequentPattern candidate = build(sub);
      if (distinguishes(candidate)) return candidate;
    }
  } else {
    SequentPattern full = build(all);
    if (distinguishes(full)) return full;
  }
  throw Error(ErrorCode::NoDistinguishingPattern,
              "no pattern separates '" + logic::toString(target) + "' from its siblings");
}

}  // namespace psdbg::matcher
