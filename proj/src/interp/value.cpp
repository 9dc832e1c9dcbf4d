#include "psdbg/interp/value.hpp"

#include "psdbg/logic/parser.hpp"

namespace psdbg::interp {

std::string typeName(const Value& v) {
  static const char* names[] = {"Int", "Bool", "String", "Term", "Formula", "Pattern"};
  return names[v.index()];
}

std::string toString(const Value& v) {
  switch (v.index()) {
    case 0: return std::to_string(std::get<0>(v));
    case 1: return std::get<1>(v) ? "true" : "false";
    case 2: return std::get<2>(v);
    case 3: return logic::toString(std::get<3>(v));
    case 4: return logic::toString(std::get<4>(v));
    default: return matcher::toString(std::get<5>(v).pattern);
  }
}

std::string canonical(const Value& v) {
  switch (v.index()) {
    case 2: return "String:" + kps::prettyPrint(kps::Expr::string(std::get<2>(v)));
    default: return typeName(v) + ":" + toString(v);
  }
}

Value evalLiteral(const std::string& text, const logic::Signature& sig, SourceLocation origin) {
  if (text.find("==>") != std::string::npos) {
    return PatternValue{text, matcher::parsePattern(text, &sig, origin)};
  }
  auto parsed = logic::parseTermOrFormula(text, sig, origin);
  if (auto* t = std::get_if<logic::Term>(&parsed)) return *t;
  return std::get<logic::Formula>(parsed);
}

namespace {

[[noreturn]] void typeError(const kps::Expr& e, const std::string& msg) {
  throw Error(ErrorCode::TypeError, msg, e.span.begin());
}

std::int64_t asInt(const Value& v, const kps::Expr& e) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  typeError(e, "operator '" + e.text + "' expects Int, got " + typeName(v));
}

bool asBool(const Value& v, const kps::Expr& e) {
  if (auto* b = std::get_if<bool>(&v)) return *b;
  typeError(e, "operator '" + e.text + "' expects Bool, got " + typeName(v));
}

}  // namespace

Value evalExpr(const kps::Expr& e, const EvalContext& ctx) {
  using K = kps::Expr::Kind;
  switch (e.kind) {
    case K::Int: return e.intValue;
    case K::Bool: return e.boolValue;
    case K::String: return e.text;
    case K::TermLit:
      if (!ctx.signature) throw Error(ErrorCode::TypeError, "term literal without a signature", e.span.begin());
      return evalLiteral(e.text, *ctx.signature, {e.span.beginLine, e.span.beginColumn + 1});
    case K::VarRef: {
      if (ctx.env) {
        if (auto it = ctx.env->find(e.text); it != ctx.env->end()) return it->second;
      }
      if (e.text == "openGoals") return ctx.openGoals;
      if (e.text == "currentLine") return ctx.currentLine;
      if (ctx.defaults) {
        if (auto it = ctx.defaults->find(e.text); it != ctx.defaults->end()) return it->second;
      }
      throw Error(ErrorCode::UndefinedVariable, "undefined variable '" + e.text + "'", e.span.begin());
    }
    case K::Unary: {
      Value v = evalExpr(e.operands[0], ctx);
      if (e.text == "!") return !asBool(v, e);
      return -asInt(v, e);
    }
    case K::Binary: break;
  }
  const std::string& op = e.text;
  if (op == "&&" || op == "||") {
    bool lhs = asBool(evalExpr(e.operands[0], ctx), e);
    if (op == "&&" ? !lhs : lhs) return lhs;
    return asBool(evalExpr(e.operands[1], ctx), e);
  }
  Value lhs = evalExpr(e.operands[0], ctx);
  Value rhs = evalExpr(e.operands[1], ctx);
  if (op == "==" || op == "!=") {
    if (lhs.index() != rhs.index()) {
      typeError(e, "cannot compare " + typeName(lhs) + " with " + typeName(rhs));
    }
    return (lhs == rhs) == (op == "==");
  }
  std::int64_t a = asInt(lhs, e);
  std::int64_t b = asInt(rhs, e);
  if (op == "+") return a + b;
  if (op == "-") return a - b;
  if (op == "<") return a < b;
  if (op == "<=") return a <= b;
  if (op == ">") return a > b;
  return a >= b;
}

}  // namespace psdbg::interp
