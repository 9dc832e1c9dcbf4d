#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "psdbg/error.hpp"
#include "psdbg/logic/signature.hpp"
#include "psdbg/logic/syntax.hpp"

namespace psdbg::matcher {

struct TermPattern {
  enum class Kind { Wildcard, SchemaVar, Variable, Constant, Application };

  Kind kind = Kind::Wildcard;
  std::string name;
  std::vector<TermPattern> args;

  static TermPattern from(const logic::Term& t);

  friend bool operator==(const TermPattern&, const TermPattern&) = default;
};

struct FormulaPattern {
  enum class Kind {
    Wildcard,
    SchemaVar,
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
  /// How a quantifier pattern treats the bound variable.
  enum class Binder { Literal, SchemaVar, Wildcard };

  Kind kind = Kind::Wildcard;
  /// Predicate name, schema variable name, or bound variable name.
  std::string name;
  Binder binder = Binder::Literal;
  std::vector<TermPattern> terms;
  std::vector<FormulaPattern> children;

  static FormulaPattern from(const logic::Formula& f);

  friend bool operator==(const FormulaPattern&, const FormulaPattern&) = default;
};

enum class SchemaKind { Term, Formula };

struct SequentPattern {
  std::vector<FormulaPattern> antecedent;
  std::vector<FormulaPattern> succedent;
  std::map<std::string, SchemaKind, std::less<>> schemaVars;

  std::size_t size() const { return antecedent.size() + succedent.size(); }
  const std::vector<FormulaPattern>& side(logic::Side s) const {
    return s == logic::Side::Antecedent ? antecedent : succedent;
  }

  friend bool operator==(const SequentPattern&, const SequentPattern&) = default;
};

/// Parses `ante1, ante2 ==> succ1`. With a signature, symbols are checked
/// against it. `origin` positions diagnostics inside an enclosing file.
SequentPattern parsePattern(std::string_view text, const logic::Signature* sig = nullptr,
                            SourceLocation origin = {1, 1});

/// Pattern that matches exactly the given formulas, without schema variables.
SequentPattern exactPattern(const std::vector<logic::Formula>& antecedent,
                            const std::vector<logic::Formula>& succedent);

std::string toString(const TermPattern& p);
std::string toString(const FormulaPattern& p);
std::string toString(const SequentPattern& p);

}  // namespace psdbg::matcher
