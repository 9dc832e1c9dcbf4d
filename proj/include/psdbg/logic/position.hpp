#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "psdbg/logic/syntax.hpp"

namespace psdbg::logic {

/// Addresses a formula occurrence in a sequent, and optionally a
/// subformula or subterm inside it via child indices.
///
/// Child numbering: negation and quantifiers have one child (0); binary
/// connectives have two; atoms and equalities number their argument terms;
/// function applications number their arguments.
struct FormulaPosition {
  Side side = Side::Antecedent;
  std::size_t index = 0;
  std::vector<std::size_t> innerPath;

  friend bool operator==(const FormulaPosition&, const FormulaPosition&) = default;
};

using Subexpression = std::variant<Formula, Term>;

/// Throws InvalidPosition when the position does not resolve.
Subexpression resolve(const Sequent& s, const FormulaPosition& pos);
const Formula& topFormula(const Sequent& s, const FormulaPosition& pos);

/// All positions of the sequent in pre-order (antecedent first).
std::vector<FormulaPosition> enumeratePositions(const Sequent& s);

/// Finds the position of a node by identity; nullopt when absent.
std::optional<FormulaPosition> locate(const Sequent& s, const void* identity);

/// Replaces the term at `path` inside `f`; the path must end at a term.
Formula replaceTerm(const Formula& f, const std::vector<std::size_t>& path, const Term& replacement);

/// "ante:0" or "succ:1:0.2".
std::string toString(const FormulaPosition& pos);
FormulaPosition parsePosition(std::string_view text);

}  // namespace psdbg::logic
