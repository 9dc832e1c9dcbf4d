#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "psdbg/logic/position.hpp"
#include "psdbg/matcher/pattern.hpp"

namespace psdbg::matcher {

using BoundValue = std::variant<logic::Term, logic::Formula>;
using Binding = std::map<std::string, BoundValue, std::less<>>;

std::string toString(const BoundValue& v);

struct Match {
  Binding binding;
  /// One position per pattern, antecedent patterns first.
  std::vector<logic::FormulaPosition> assignment;

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchResult {
  std::vector<Match> matches;

  bool empty() const { return matches.empty(); }
  const Match& canonical() const { return matches.front(); }

  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Matches one formula pattern, extending `binding`. On failure the
/// binding may be partially extended.
bool matchFormula(const FormulaPattern& p, const logic::Formula& f, Binding& binding);

/// All matches in lexicographic order of the assignment. Entries of
/// `preBound` whose kind agrees with the pattern's schema variable act as
/// constraints and are included in every resulting binding.
MatchResult matchSequent(const SequentPattern& p, const logic::Sequent& s,
                         const Binding& preBound = {});

/// Reference implementation: tries every injective assignment.
MatchResult bruteForceMatch(const SequentPattern& p, const logic::Sequent& s,
                            const Binding& preBound = {});

/// A schema-free pattern built from the target's own formulas that matches
/// the target and none of the siblings. Throws NoDistinguishingPattern.
SequentPattern generateCasePattern(const logic::Sequent& target,
                                   const std::vector<logic::Sequent>& siblings);

}  // namespace psdbg::matcher
