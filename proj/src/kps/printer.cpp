#include "psdbg/kps/ast.hpp"

namespace psdbg::kps {

namespace {

int precedence(const Expr& e) {
  if (e.kind == Expr::Kind::Unary) return 5;
  if (e.kind != Expr::Kind::Binary) return 6;
  const std::string& op = e.text;
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "+" || op == "-") return 4;
  return 3;
}

void print(std::string& out, const Expr& e, int context) {
  const int prec = precedence(e);
  const bool parens = prec < context;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Int: out += std::to_string(e.intValue); break;
    case Expr::Kind::Bool: out += e.boolValue ? "true" : "false"; break;
    case Expr::Kind::String:
      out += '"';
      for (char c : e.text) {
        if (c == '"' || c == '\\') {
          out += '\\';
          out += c;
        } else if (c == '\n') {
          out += "\\n";
        } else {
          out += c;
        }
      }
      out += '"';
      break;
    case Expr::Kind::TermLit: out += '`' + e.text + '`'; break;
    case Expr::Kind::VarRef: out += e.text; break;
    case Expr::Kind::Unary:
      out += e.text;
      print(out, e.operands[0], 5);
      break;
    case Expr::Kind::Binary:
      // Comparisons do not chain, so both sides bind tighter.
      print(out, e.operands[0], prec == 3 ? 4 : prec);
      out += ' ' + e.text + ' ';
      print(out, e.operands[1], prec + 1);
      break;
  }
  if (parens) out += ')';
}

void indentTo(std::string& out, int indent) { out.append(static_cast<std::size_t>(indent) * 2, ' '); }

void print(std::string& out, const Block& b, int indent);

void print(std::string& out, const Statement& s, int indent) {
  indentTo(out, indent);
  switch (s.kind) {
    case Statement::Kind::Command:
      out += s.name;
      for (const Argument& a : s.args) {
        out += ' ' + a.name + '=';
        print(out, a.value, 0);
      }
      out += ";\n";
      break;
    case Statement::Kind::Assignment:
      out += s.name + " := ";
      print(out, s.value, 0);
      out += ";\n";
      break;
    case Statement::Kind::ScriptCall:
      out += s.name + '(';
      for (std::size_t i = 0; i < s.args.size(); ++i) {
        if (i) out += ", ";
        out += s.args[i].name + '=';
        print(out, s.args[i].value, 0);
      }
      out += ");\n";
      break;
    case Statement::Kind::Foreach:
    case Statement::Kind::TheOnly:
      out += s.kind == Statement::Kind::Foreach ? "foreach {\n" : "theonly {\n";
      print(out, s.body, indent + 1);
      indentTo(out, indent);
      out += "}\n";
      break;
    case Statement::Kind::Cases:
      out += "cases {\n";
      for (const CaseBranch& c : s.cases) {
        indentTo(out, indent + 1);
        out += "case match `" + c.pattern + "`:\n";
        print(out, c.body, indent + 2);
      }
      if (s.defaultBlock) {
        indentTo(out, indent + 1);
        out += "default:\n";
        print(out, *s.defaultBlock, indent + 2);
      }
      indentTo(out, indent);
      out += "}\n";
      break;
  }
}

void print(std::string& out, const Block& b, int indent) {
  for (const Statement& s : b) print(out, s, indent);
}

bool sameArgs(const std::vector<Argument>& a, const std::vector<Argument>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name || !structurallyEqual(a[i].value, b[i].value)) return false;
  return true;
}

bool sameStatement(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.name != b.name || !sameArgs(a.args, b.args)) return false;
  if (a.kind == Statement::Kind::Assignment && !structurallyEqual(a.value, b.value)) return false;
  if (!structurallyEqual(a.body, b.body) || a.cases.size() != b.cases.size()) return false;
  for (std::size_t i = 0; i < a.cases.size(); ++i)
    if (a.cases[i].pattern != b.cases[i].pattern || !structurallyEqual(a.cases[i].body, b.cases[i].body))
      return false;
  if (a.defaultBlock.has_value() != b.defaultBlock.has_value()) return false;
  return !a.defaultBlock || structurallyEqual(*a.defaultBlock, *b.defaultBlock);
}

}  // namespace

std::string prettyPrint(const Expr& e) {
  std::string out;
  print(out, e, 0);
  return out;
}

std::string prettyPrint(const Statement& s, int indent) {
  std::string out;
  print(out, s, indent);
  return out;
}

std::string prettyPrint(const Block& block, int indent) {
  std::string out;
  print(out, block, indent);
  return out;
}

std::string prettyPrint(const Script& s) {
  std::string out = "script " + s.name + "(";
  for (std::size_t i = 0; i < s.params.size(); ++i) {
    if (i) out += ", ";
    out += s.params[i].name;
    if (s.params[i].defaultValue) out += " = " + prettyPrint(*s.params[i].defaultValue);
  }
  out += ") {\n";
  print(out, s.body, 1);
  out += "}\n";
  return out;
}

std::string prettyPrint(const ScriptFile& f) {
  std::string out;
  for (std::size_t i = 0; i < f.scripts.size(); ++i) {
    if (i) out += '\n';
    out += prettyPrint(f.scripts[i]);
  }
  return out;
}

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text || a.operands.size() != b.operands.size()) return false;
  if (a.kind == Expr::Kind::Int && a.intValue != b.intValue) return false;
  if (a.kind == Expr::Kind::Bool && a.boolValue != b.boolValue) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!structurallyEqual(a.operands[i], b.operands[i])) return false;
  return true;
}

bool structurallyEqual(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!sameStatement(a[i], b[i])) return false;
  return true;
}

bool structurallyEqual(const ScriptFile& a, const ScriptFile& b) {
  if (a.scripts.size() != b.scripts.size()) return false;
  for (std::size_t i = 0; i < a.scripts.size(); ++i) {
    const Script& x = a.scripts[i];
    const Script& y = b.scripts[i];
    if (x.name != y.name || x.params.size() != y.params.size() || !structurallyEqual(x.body, y.body)) return false;
    for (std::size_t k = 0; k < x.params.size(); ++k) {
      if (x.params[k].name != y.params[k].name ||
          x.params[k].defaultValue.has_value() != y.params[k].defaultValue.has_value())
        return false;
      if (x.params[k].defaultValue && !structurallyEqual(*x.params[k].defaultValue, *y.params[k].defaultValue))
        return false;
    }
  }
  return true;
}

}  // namespace psdbg::kps
