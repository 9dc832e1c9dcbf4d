#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "psdbg/logic/syntax.hpp"

namespace psdbg::logic {

enum class SymbolKind { Constant, Function, Predicate };

/// Declared symbols. Constants, functions, and predicates live in one
/// namespace: a name is declared at most once.
class Signature {
 public:
  void declareConstant(const std::string& name);
  void declareFunction(const std::string& name, int arity);
  void declarePredicate(const std::string& name, int arity);

  bool contains(std::string_view name) const;
  std::optional<SymbolKind> kindOf(std::string_view name) const;
  /// Arity of a function or predicate; 0 for constants.
  std::optional<int> arity(std::string_view name) const;

  const std::set<std::string, std::less<>>& constants() const { return constants_; }
  const std::map<std::string, int, std::less<>>& functions() const { return functions_; }
  const std::map<std::string, int, std::less<>>& predicates() const { return predicates_; }

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  void checkUnused(const std::string& name) const;

  std::set<std::string, std::less<>> constants_;
  std::map<std::string, int, std::less<>> functions_;
  std::map<std::string, int, std::less<>> predicates_;
};

/// Returns `base` if no symbol of that name exists, otherwise the first
/// unused of base_0, base_1, ...; the result is declared as a constant.
std::string freshConstant(Signature& sig, const std::string& base);

/// A parsed proof obligation: assumptions ==> conjecture.
struct Problem {
  Signature signature;
  std::vector<Formula> assumptions;
  Formula conjecture = Formula::truth();
  std::string sourceText;

  Sequent rootSequent() const { return Sequent{assumptions, {conjecture}}; }
};

bool isIdentifier(std::string_view name);

}  // namespace psdbg::logic
