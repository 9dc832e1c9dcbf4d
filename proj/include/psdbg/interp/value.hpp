#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>

#include "psdbg/kps/ast.hpp"
#include "psdbg/logic/signature.hpp"
#include "psdbg/logic/syntax.hpp"
#include "psdbg/matcher/pattern.hpp"

namespace psdbg::interp {

struct PatternValue {
  std::string text;
  matcher::SequentPattern pattern;

  friend bool operator==(const PatternValue& a, const PatternValue& b) { return a.pattern == b.pattern; }
};

using Value = std::variant<std::int64_t, bool, std::string, logic::Term, logic::Formula, PatternValue>;
using Env = std::map<std::string, Value, std::less<>>;

std::string typeName(const Value& v);
/// Display form; strings are shown without quotes.
std::string toString(const Value& v);
/// Unambiguous form with a type tag, used for digests.
std::string canonical(const Value& v);

/// Readable builtins and the signature used for term literals.
struct EvalContext {
  const Env* env = nullptr;
  std::int64_t openGoals = 0;
  std::int64_t currentLine = 0;
  const logic::Signature* signature = nullptr;
  const Env* defaults = nullptr;
};

/// Strict evaluation with short-circuit `&&` and `||`. Throws TypeError
/// and UndefinedVariable.
Value evalExpr(const kps::Expr& e, const EvalContext& ctx);

/// A backtick literal: a pattern if it contains `==>`, else a formula,
/// else a term.
Value evalLiteral(const std::string& text, const logic::Signature& sig, SourceLocation origin = {1, 1});

}  // namespace psdbg::interp
