#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace psdbg::logic {

/// Immutable first-order term. Copies share structure.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Constant, Application };

  static Term variable(std::string name);
  static Term constant(std::string name);
  static Term application(std::string function, std::vector<Term> args);

  Kind kind() const noexcept;
  const std::string& name() const noexcept;
  const std::vector<Term>& args() const noexcept;

  bool isVariable() const noexcept { return kind() == Kind::Variable; }
  bool isGround() const;
  /// Number of AST nodes.
  std::size_t size() const;
  /// Node identity, used to re-address a shared subterm.
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator<(const Term& a, const Term& b);

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  Kind kind;
  std::string name;
  std::vector<Term> args;
};

inline Term::Kind Term::kind() const noexcept { return node_->kind; }
inline const std::string& Term::name() const noexcept { return node_->name; }
inline const std::vector<Term>& Term::args() const noexcept { return node_->args; }

/// Immutable first-order formula. Bound variable names are kept exactly as
/// written; alpha-equivalence is never implied by operator==.
class Formula {
 public:
  enum class Kind : std::uint8_t {
    Atom,
    Equality,
    True,
    False,
    Not,
    And,
    Or,
    Implies,
    Forall,
    Exists,
  };

  static Formula atom(std::string predicate, std::vector<Term> args = {});
  static Formula equality(Term left, Term right);
  static Formula truth();
  static Formula falsity();
  static Formula negation(Formula f);
  static Formula conjunction(Formula a, Formula b);
  static Formula disjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula forall(std::string var, Formula body);
  static Formula exists(std::string var, Formula body);
  static Formula quantifier(Kind kind, std::string var, Formula body);
  static Formula binary(Kind kind, Formula a, Formula b);

  Kind kind() const noexcept;
  /// Predicate name for atoms, bound variable for quantifiers, empty otherwise.
  const std::string& name() const noexcept;
  /// Atom arguments, or the two sides of an equality.
  const std::vector<Term>& terms() const noexcept;
  const std::vector<Formula>& children() const noexcept;

  const Formula& body() const { return children().front(); }
  const Formula& left() const { return children().front(); }
  const Formula& right() const { return children().back(); }

  bool isQuantifier() const noexcept {
    return kind() == Kind::Forall || kind() == Kind::Exists;
  }
  bool isBinary() const noexcept {
    return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
  }
  std::size_t size() const;
  const void* identity() const noexcept { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Formula::Node {
  Kind kind;
  std::string name;
  std::vector<Term> terms;
  std::vector<Formula> children;
};

inline Formula::Kind Formula::kind() const noexcept { return node_->kind; }
inline const std::string& Formula::name() const noexcept { return node_->name; }
inline const std::vector<Term>& Formula::terms() const noexcept { return node_->terms; }
inline const std::vector<Formula>& Formula::children() const noexcept { return node_->children; }

enum class Side : std::uint8_t { Antecedent, Succedent };

/// Antecedent ==> succedent. Order is significant; duplicates allowed.
struct Sequent {
  std::vector<Formula> antecedent;
  std::vector<Formula> succedent;

  std::vector<Formula>& side(Side s) { return s == Side::Antecedent ? antecedent : succedent; }
  const std::vector<Formula>& side(Side s) const {
    return s == Side::Antecedent ? antecedent : succedent;
  }
  std::size_t size() const { return antecedent.size() + succedent.size(); }

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

std::string toString(const Term& t);
std::string toString(const Formula& f);

/// Where a subformula or subterm landed in printed text: child-index path
/// from the printed formula and the half-open character range.
struct PrintedSpan {
  std::vector<std::size_t> path;
  std::size_t begin = 0;
  std::size_t end = 0;
};

/// Prints like toString and records one span per node, children first.
std::string toString(const Formula& f, std::vector<PrintedSpan>& spans);
std::string toString(const Sequent& s);
std::string_view toString(Side side);

std::ostream& operator<<(std::ostream& os, const Term& t);
std::ostream& operator<<(std::ostream& os, const Formula& f);
std::ostream& operator<<(std::ostream& os, const Sequent& s);

std::set<std::string> freeVariables(const Term& t);
std::set<std::string> freeVariables(const Formula& f);
/// Every variable name occurring in f, free or bound.
std::set<std::string> allVariables(const Formula& f);
bool isClosed(const Formula& f);

/// Ground subterms in pre-order, left to right, without duplicates.
void collectGroundTerms(const Term& t, std::vector<Term>& out);
void collectGroundTerms(const Formula& f, std::vector<Term>& out);
std::vector<Term> groundTerms(const Sequent& s);

}  // namespace psdbg::logic
