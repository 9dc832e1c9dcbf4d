#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "psdbg/error.hpp"

namespace psdbg::kps {

/// Half-open range of source text. Lines and columns are 1-based; the end
/// position is the character just past the range.
struct SourceSpan {
  int beginLine = 0;
  int beginColumn = 0;
  int endLine = 0;
  int endColumn = 0;
  std::size_t beginOffset = 0;
  std::size_t endOffset = 0;

  SourceLocation begin() const { return {beginLine, beginColumn}; }

  friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Script name plus the statement's pre-order index within that script.
struct StatementId {
  std::string script;
  int index = -1;

  bool valid() const { return index >= 0; }

  friend bool operator==(const StatementId&, const StatementId&) = default;
  friend auto operator<=>(const StatementId&, const StatementId&) = default;
};

std::string toString(const StatementId& id);

struct Expr {
  enum class Kind { Int, Bool, String, TermLit, VarRef, Unary, Binary };

  Kind kind = Kind::Int;
  std::int64_t intValue = 0;
  bool boolValue = false;
  /// String contents, backtick contents, variable name, or operator.
  std::string text;
  std::vector<Expr> operands;
  SourceSpan span;

  static Expr integer(std::int64_t v);
  static Expr boolean(bool v);
  static Expr string(std::string v);
  static Expr termLit(std::string text);
  static Expr var(std::string name);
  static Expr unary(std::string op, Expr operand);
  static Expr binary(std::string op, Expr lhs, Expr rhs);
};

struct Argument {
  std::string name;
  Expr value;
};

struct Statement;
using Block = std::vector<Statement>;

struct CaseBranch {
  /// Backtick contents of the `case match` literal.
  std::string pattern;
  SourceSpan patternSpan;
  Block body;
  SourceSpan span;
};

struct Statement {
  enum class Kind { Command, Assignment, Foreach, TheOnly, Cases, ScriptCall };

  Kind kind = Kind::Command;
  StatementId id;
  SourceSpan span;
  /// Command name, assigned variable, or called script.
  std::string name;
  std::vector<Argument> args;
  Expr value;
  Block body;
  std::vector<CaseBranch> cases;
  std::optional<Block> defaultBlock;
  SourceSpan defaultSpan;

  bool isCompound() const {
    return kind == Kind::Foreach || kind == Kind::TheOnly || kind == Kind::Cases || kind == Kind::ScriptCall;
  }
  const Argument* arg(std::string_view argName) const;
};

struct Parameter {
  std::string name;
  std::optional<Expr> defaultValue;
};

struct Script {
  std::string name;
  std::vector<Parameter> params;
  Block body;
  SourceSpan span;
};

struct ScriptFile {
  std::vector<Script> scripts;
  std::string sourceText;

  const Script* find(std::string_view name) const;
  /// The statement with the given id, or nullptr.
  const Statement* statement(const StatementId& id) const;
  /// Every statement of the file in pre-order, scripts in file order.
  std::vector<const Statement*> allStatements() const;
};

ScriptFile parseScript(std::string_view text);
/// A single expression, such as a breakpoint condition.
Expr parseExpression(std::string_view text);

/// Text of one statement list, one statement per line, indented by
/// 2 * `indent` spaces.
std::string prettyPrint(const Block& block, int indent = 0);
std::string prettyPrint(const Statement& s, int indent = 0);
std::string prettyPrint(const Expr& e);
std::string prettyPrint(const Script& s);
std::string prettyPrint(const ScriptFile& f);

/// AST equality ignoring spans and statement ids.
bool structurallyEqual(const Expr& a, const Expr& b);
bool structurallyEqual(const Block& a, const Block& b);
bool structurallyEqual(const ScriptFile& a, const ScriptFile& b);

}  // namespace psdbg::kps
