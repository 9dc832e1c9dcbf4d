#include "psdbg/logic/signature.hpp"

#include <cctype>

#include "psdbg/error.hpp"

namespace psdbg::logic {

bool isIdentifier(std::string_view name) {
  if (name.empty()) return false;
  auto c0 = static_cast<unsigned char>(name[0]);
  if (!std::isalpha(c0) && c0 != '_') return false;
  for (char ch : name) {
    auto c = static_cast<unsigned char>(ch);
    if (!std::isalnum(c) && c != '_') return false;
  }
  return true;
}

void Signature::checkUnused(const std::string& name) const {
  if (!isIdentifier(name)) throw Error(ErrorCode::SyntaxError, "invalid symbol name '" + name + "'");
  if (contains(name)) throw Error(ErrorCode::DuplicateSymbol, "symbol '" + name + "' already declared");
}

void Signature::declareConstant(const std::string& name) {
  checkUnused(name);
  constants_.insert(name);
}

void Signature::declareFunction(const std::string& name, int arity) {
  checkUnused(name);
  if (arity < 1) throw Error(ErrorCode::ArityMismatch, "function '" + name + "' needs arity >= 1");
  functions_.emplace(name, arity);
}

void Signature::declarePredicate(const std::string& name, int arity) {
  checkUnused(name);
  if (arity < 0) throw Error(ErrorCode::ArityMismatch, "negative arity for '" + name + "'");
  predicates_.emplace(name, arity);
}

bool Signature::contains(std::string_view name) const { return kindOf(name).has_value(); }

std::optional<SymbolKind> Signature::kindOf(std::string_view name) const {
  if (constants_.find(name) != constants_.end()) return SymbolKind::Constant;
  if (functions_.find(name) != functions_.end()) return SymbolKind::Function;
  if (predicates_.find(name) != predicates_.end()) return SymbolKind::Predicate;
  return std::nullopt;
}

std::optional<int> Signature::arity(std::string_view name) const {
  if (constants_.find(name) != constants_.end()) return 0;
  if (auto it = functions_.find(name); it != functions_.end()) return it->second;
  if (auto it = predicates_.find(name); it != predicates_.end()) return it->second;
  return std::nullopt;
}

std::string freshConstant(Signature& sig, const std::string& base) {
  std::string name = base;
  for (int i = 0; sig.contains(name); ++i) name = base + "_" + std::to_string(i);
  sig.declareConstant(name);
  return name;
}

}  // namespace psdbg::logic
