#include "psdbg/logic/syntax.hpp"

#include <algorithm>
#include <ostream>

namespace psdbg::logic {

Term Term::variable(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Variable, std::move(name), {}}));
}

Term Term::constant(std::string name) {
  return Term(std::make_shared<const Node>(Node{Kind::Constant, std::move(name), {}}));
}

Term Term::application(std::string function, std::vector<Term> args) {
  return Term(
      std::make_shared<const Node>(Node{Kind::Application, std::move(function), std::move(args)}));
}

bool Term::isGround() const {
  if (kind() == Kind::Variable) return false;
  return std::all_of(args().begin(), args().end(), [](const Term& t) { return t.isGround(); });
}

std::size_t Term::size() const {
  std::size_t n = 1;
  for (const Term& a : args()) n += a.size();
  return n;
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args();
}

namespace {

template <typename T>
int compareSeq(const std::vector<T>& a, const std::vector<T>& b);

int compareTerm(const Term& a, const Term& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  return compareSeq(a.args(), b.args());
}

int compareFormula(const Formula& a, const Formula& b);

int compareItem(const Term& a, const Term& b) { return compareTerm(a, b); }
int compareItem(const Formula& a, const Formula& b) { return compareFormula(a, b); }

template <typename T>
int compareSeq(const std::vector<T>& a, const std::vector<T>& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (int c = compareItem(a[i], b[i])) return c;
  }
  if (a.size() == b.size()) return 0;
  return a.size() < b.size() ? -1 : 1;
}

int compareFormula(const Formula& a, const Formula& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name())) return c < 0 ? -1 : 1;
  if (int c = compareSeq(a.terms(), b.terms())) return c;
  return compareSeq(a.children(), b.children());
}

}  // namespace

bool operator<(const Term& a, const Term& b) { return compareTerm(a, b) < 0; }

Formula Formula::atom(std::string predicate, std::vector<Term> args) {
  return Formula(
      std::make_shared<const Node>(Node{Kind::Atom, std::move(predicate), std::move(args), {}}));
}

Formula Formula::equality(Term left, Term right) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Equality, {}, {std::move(left), std::move(right)}, {}}));
}

Formula Formula::truth() {
  return Formula(std::make_shared<const Node>(Node{Kind::True, {}, {}, {}}));
}

Formula Formula::falsity() {
  return Formula(std::make_shared<const Node>(Node{Kind::False, {}, {}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, {}, {}, {std::move(f)}}));
}

Formula Formula::binary(Kind kind, Formula a, Formula b) {
  return Formula(std::make_shared<const Node>(Node{kind, {}, {}, {std::move(a), std::move(b)}}));
}

Formula Formula::conjunction(Formula a, Formula b) {
  return binary(Kind::And, std::move(a), std::move(b));
}
Formula Formula::disjunction(Formula a, Formula b) {
  return binary(Kind::Or, std::move(a), std::move(b));
}
Formula Formula::implication(Formula a, Formula b) {
  return binary(Kind::Implies, std::move(a), std::move(b));
}

Formula Formula::quantifier(Kind kind, std::string var, Formula body) {
  return Formula(
      std::make_shared<const Node>(Node{kind, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  return quantifier(Kind::Forall, std::move(var), std::move(body));
}
Formula Formula::exists(std::string var, Formula body) {
  return quantifier(Kind::Exists, std::move(var), std::move(body));
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const Term& t : terms()) n += t.size();
  for (const Formula& c : children()) n += c.size();
  return n;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.terms() == b.terms() &&
         a.children() == b.children();
}

bool operator<(const Formula& a, const Formula& b) { return compareFormula(a, b) < 0; }

// --- printing ---------------------------------------------------------------

namespace {

// Binding strength used to decide parenthesization.
int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: return 0;
    case Formula::Kind::Implies: return 1;
    case Formula::Kind::Or: return 2;
    case Formula::Kind::And: return 3;
    case Formula::Kind::Not: return 4;
    default: return 5;
  }
}

struct Recorder {
  std::vector<std::size_t> path;
  std::vector<PrintedSpan>* spans;
};

void print(std::string& out, const Term& t, Recorder* rec = nullptr) {
  const std::size_t begin = out.size();
  out += t.name();
  if (t.kind() == Term::Kind::Application) {
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ", ";
      if (rec) rec->path.push_back(i);
      print(out, t.args()[i], rec);
      if (rec) rec->path.pop_back();
    }
    out += ')';
  }
  if (rec) rec->spans->push_back({rec->path, begin, out.size()});
}

void print(std::string& out, const Formula& f, int context, Recorder* rec = nullptr) {
  const int prec = precedence(f);
  // Quantifier bodies extend maximally, so they only go bare at top level.
  const bool parens = prec == 0 ? context > 0 : prec < context;
  if (parens) out += '(';
  const std::size_t begin = out.size();
  auto child = [&](std::size_t i, auto&& printChild) {
    if (rec) rec->path.push_back(i);
    printChild();
    if (rec) rec->path.pop_back();
  };
  switch (f.kind()) {
    case Formula::Kind::Atom:
      out += f.name();
      if (!f.terms().empty()) {
        out += '(';
        for (std::size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ", ";
          child(i, [&] { print(out, f.terms()[i], rec); });
        }
        out += ')';
      }
      break;
    case Formula::Kind::Equality:
      child(0, [&] { print(out, f.terms()[0], rec); });
      out += " = ";
      child(1, [&] { print(out, f.terms()[1], rec); });
      break;
    case Formula::Kind::True: out += "true"; break;
    case Formula::Kind::False: out += "false"; break;
    case Formula::Kind::Not:
      out += '!';
      child(0, [&] { print(out, f.body(), 4, rec); });
      break;
    case Formula::Kind::And:
      child(0, [&] { print(out, f.left(), 3, rec); });
      out += " & ";
      child(1, [&] { print(out, f.right(), 4, rec); });
      break;
    case Formula::Kind::Or:
      child(0, [&] { print(out, f.left(), 2, rec); });
      out += " | ";
      child(1, [&] { print(out, f.right(), 3, rec); });
      break;
    case Formula::Kind::Implies:
      child(0, [&] { print(out, f.left(), 2, rec); });
      out += " -> ";
      child(1, [&] { print(out, f.right(), 1, rec); });
      break;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      out += f.kind() == Formula::Kind::Forall ? "\\forall " : "\\exists ";
      out += f.name();
      out += ". ";
      child(0, [&] { print(out, f.body(), 0, rec); });
      break;
  }
  if (rec) rec->spans->push_back({rec->path, begin, out.size()});
  if (parens) out += ')';
}

void printList(std::string& out, const std::vector<Formula>& fs) {
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (i) out += ", ";
    print(out, fs[i], 0);
  }
}

}  // namespace

std::string toString(const Term& t) {
  std::string out;
  print(out, t);
  return out;
}

std::string toString(const Formula& f) {
  std::string out;
  print(out, f, 0);
  return out;
}

std::string toString(const Formula& f, std::vector<PrintedSpan>& spans) {
  std::string out;
  Recorder rec{{}, &spans};
  print(out, f, 0, &rec);
  return out;
}

std::string toString(const Sequent& s) {
  std::string out;
  printList(out, s.antecedent);
  out += s.antecedent.empty() ? "==>" : " ==>";
  if (!s.succedent.empty()) out += ' ';
  printList(out, s.succedent);
  return out;
}

std::string_view toString(Side side) { return side == Side::Antecedent ? "ante" : "succ"; }

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << toString(t); }
std::ostream& operator<<(std::ostream& os, const Formula& f) { return os << toString(f); }
std::ostream& operator<<(std::ostream& os, const Sequent& s) { return os << toString(s); }

// --- variables --------------------------------------------------------------

namespace {

void freeVars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == Term::Kind::Variable) out.insert(t.name());
  for (const Term& a : t.args()) freeVars(a, out);
}

void freeVars(const Formula& f, std::set<std::string>& out) {
  for (const Term& t : f.terms()) freeVars(t, out);
  if (f.isQuantifier()) {
    std::set<std::string> inner;
    freeVars(f.body(), inner);
    inner.erase(f.name());
    out.insert(inner.begin(), inner.end());
    return;
  }
  for (const Formula& c : f.children()) freeVars(c, out);
}

void allVars(const Formula& f, std::set<std::string>& out) {
  for (const Term& t : f.terms()) freeVars(t, out);
  if (f.isQuantifier()) out.insert(f.name());
  for (const Formula& c : f.children()) allVars(c, out);
}

}  // namespace

std::set<std::string> freeVariables(const Term& t) {
  std::set<std::string> out;
  freeVars(t, out);
  return out;
}

std::set<std::string> freeVariables(const Formula& f) {
  std::set<std::string> out;
  freeVars(f, out);
  return out;
}

std::set<std::string> allVariables(const Formula& f) {
  std::set<std::string> out;
  allVars(f, out);
  return out;
}

bool isClosed(const Formula& f) { return freeVariables(f).empty(); }

void collectGroundTerms(const Term& t, std::vector<Term>& out) {
  if (t.isGround() && std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  for (const Term& a : t.args()) collectGroundTerms(a, out);
}

void collectGroundTerms(const Formula& f, std::vector<Term>& out) {
  for (const Term& t : f.terms()) collectGroundTerms(t, out);
  for (const Formula& c : f.children()) collectGroundTerms(c, out);
}

std::vector<Term> groundTerms(const Sequent& s) {
  std::vector<Term> out;
  for (const Formula& f : s.antecedent) collectGroundTerms(f, out);
  for (const Formula& f : s.succedent) collectGroundTerms(f, out);
  return out;
}

}  // namespace psdbg::logic
