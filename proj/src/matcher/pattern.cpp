#include "psdbg/matcher/pattern.hpp"

#include "psdbg/logic/lexer.hpp"

namespace psdbg::matcher {

using logic::Formula;
using logic::Term;
using logic::Token;
using logic::TokenKind;

TermPattern TermPattern::from(const Term& t) {
  TermPattern p;
  p.name = t.name();
  switch (t.kind()) {
    case Term::Kind::Variable: p.kind = Kind::Variable; break;
    case Term::Kind::Constant: p.kind = Kind::Constant; break;
    case Term::Kind::Application:
      p.kind = Kind::Application;
      for (const Term& a : t.args()) p.args.push_back(from(a));
      break;
  }
  return p;
}

FormulaPattern FormulaPattern::from(const Formula& f) {
  FormulaPattern p;
  using FK = Formula::Kind;
  switch (f.kind()) {
    case FK::Atom: p.kind = Kind::Atom; break;
    case FK::Equality: p.kind = Kind::Equality; break;
    case FK::True: p.kind = Kind::True; break;
    case FK::False: p.kind = Kind::False; break;
    case FK::Not: p.kind = Kind::Not; break;
    case FK::And: p.kind = Kind::And; break;
    case FK::Or: p.kind = Kind::Or; break;
    case FK::Implies: p.kind = Kind::Implies; break;
    case FK::Forall: p.kind = Kind::Forall; break;
    case FK::Exists: p.kind = Kind::Exists; break;
  }
  if (f.kind() == FK::Atom || f.isQuantifier()) p.name = f.name();
  for (const Term& t : f.terms()) p.terms.push_back(TermPattern::from(t));
  for (const Formula& c : f.children()) p.children.push_back(from(c));
  return p;
}

SequentPattern exactPattern(const std::vector<Formula>& antecedent,
                            const std::vector<Formula>& succedent) {
  SequentPattern p;
  for (const Formula& f : antecedent) p.antecedent.push_back(FormulaPattern::from(f));
  for (const Formula& f : succedent) p.succedent.push_back(FormulaPattern::from(f));
  return p;
}

namespace {

class PatternParser {
 public:
  PatternParser(logic::TokenStream& ts, const logic::Signature* sig, SequentPattern& out)
      : ts_(ts), sig_(sig), out_(out) {}

  std::vector<FormulaPattern> list() {
    std::vector<FormulaPattern> items;
    if (ts_.at(TokenKind::SequentArrow) || ts_.at(TokenKind::End)) return items;
    items.push_back(formula());
    while (ts_.accept(TokenKind::Comma)) items.push_back(formula());
    return items;
  }

 private:
  using FK = FormulaPattern::Kind;
  using TK = TermPattern::Kind;

  FormulaPattern formula() {
    FormulaPattern lhs = disjunction();
    if (ts_.accept(TokenKind::Arrow)) return binary(FK::Implies, std::move(lhs), formula());
    return lhs;
  }

  FormulaPattern disjunction() {
    FormulaPattern lhs = conjunction();
    while (ts_.accept(TokenKind::Pipe)) lhs = binary(FK::Or, std::move(lhs), conjunction());
    return lhs;
  }

  FormulaPattern conjunction() {
    FormulaPattern lhs = unary();
    while (ts_.accept(TokenKind::Amp)) lhs = binary(FK::And, std::move(lhs), unary());
    return lhs;
  }

  static FormulaPattern binary(FK kind, FormulaPattern a, FormulaPattern b) {
    FormulaPattern p;
    p.kind = kind;
    p.children.push_back(std::move(a));
    p.children.push_back(std::move(b));
    return p;
  }

  FormulaPattern unary() {
    if (ts_.accept(TokenKind::Bang)) {
      FormulaPattern p;
      p.kind = FK::Not;
      p.children.push_back(unary());
      return p;
    }
    if (ts_.at(TokenKind::Forall) || ts_.at(TokenKind::Exists)) {
      FormulaPattern p;
      p.kind = ts_.next().kind == TokenKind::Forall ? FK::Forall : FK::Exists;
      const Token& var = ts_.peek();
      if (var.kind == TokenKind::SchemaVar) {
        p.binder = FormulaPattern::Binder::SchemaVar;
        noteSchema(var, SchemaKind::Term);
      } else if (var.kind == TokenKind::Ident && var.text == "_") {
        p.binder = FormulaPattern::Binder::Wildcard;
      } else if (var.kind == TokenKind::Ident) {
        p.binder = FormulaPattern::Binder::Literal;
      } else {
        ts_.fail("expected a bound variable, '?X' or '_'");
      }
      p.name = ts_.next().text;
      ts_.accept(TokenKind::Dot);
      bool literal = p.binder == FormulaPattern::Binder::Literal;
      if (literal) bound_.push_back(p.name);
      p.children.push_back(formula());
      if (literal) bound_.pop_back();
      return p;
    }
    return primary();
  }

  FormulaPattern primary() {
    if (ts_.accept(TokenKind::LParen)) {
      FormulaPattern p = formula();
      ts_.expect(TokenKind::RParen);
      return p;
    }
    const Token head = ts_.peek();
    if (head.kind == TokenKind::SchemaVar) {
      ts_.next();
      if (ts_.at(TokenKind::Equals)) return equality(schemaTerm(head));
      noteSchema(head, SchemaKind::Formula);
      FormulaPattern p;
      p.kind = FK::SchemaVar;
      p.name = head.text;
      return p;
    }
    const Token name = ts_.expect(TokenKind::Ident, "a formula pattern");
    bool applied = false;
    std::vector<TermPattern> args;
    if (ts_.accept(TokenKind::LParen)) {
      applied = true;
      args = termList();
    }
    if (ts_.at(TokenKind::Equals)) return equality(resolveTerm(name, applied, std::move(args)));
    FormulaPattern p;
    if (name.text == "_" && !applied) return p;
    if (!applied && (name.text == "true" || name.text == "false")) {
      p.kind = name.text == "true" ? FK::True : FK::False;
      return p;
    }
    if (isBound(name.text)) ts_.fail("expected '=' after term '" + name.text + "'");
    if (sig_) {
      auto kind = sig_->kindOf(name.text);
      if (!kind) {
        throw Error(ErrorCode::UndeclaredSymbol, "undeclared predicate '" + name.text + "'",
                    name.location);
      }
      if (*kind != logic::SymbolKind::Predicate) ts_.fail("expected '=' after term '" + name.text + "'");
      if (*sig_->arity(name.text) != static_cast<int>(args.size())) {
        throw Error(ErrorCode::ArityMismatch,
                    "predicate '" + name.text + "' expects " +
                        std::to_string(*sig_->arity(name.text)) + " argument(s)",
                    name.location);
      }
    }
    p.kind = FK::Atom;
    p.name = name.text;
    p.terms = std::move(args);
    return p;
  }

  FormulaPattern equality(TermPattern lhs) {
    ts_.expect(TokenKind::Equals);
    FormulaPattern p;
    p.kind = FK::Equality;
    p.terms.push_back(std::move(lhs));
    p.terms.push_back(term());
    return p;
  }

  TermPattern term() {
    if (ts_.at(TokenKind::SchemaVar)) return schemaTerm(ts_.next());
    const Token name = ts_.expect(TokenKind::Ident, "a term pattern");
    bool applied = false;
    std::vector<TermPattern> args;
    if (ts_.accept(TokenKind::LParen)) {
      applied = true;
      args = termList();
    }
    return resolveTerm(name, applied, std::move(args));
  }

  std::vector<TermPattern> termList() {
    std::vector<TermPattern> args;
    args.push_back(term());
    while (ts_.accept(TokenKind::Comma)) args.push_back(term());
    ts_.expect(TokenKind::RParen);
    return args;
  }

  TermPattern schemaTerm(const Token& tok) {
    noteSchema(tok, SchemaKind::Term);
    TermPattern p;
    p.kind = TK::SchemaVar;
    p.name = tok.text;
    return p;
  }

  TermPattern resolveTerm(const Token& name, bool applied, std::vector<TermPattern> args) {
    TermPattern p;
    p.name = name.text;
    if (!applied && name.text == "_") {
      p.kind = TK::Wildcard;
      p.name.clear();
      return p;
    }
    if (!applied && isBound(name.text)) {
      p.kind = TK::Variable;
      return p;
    }
    if (sig_) {
      auto kind = sig_->kindOf(name.text);
      if (!kind) {
        throw Error(ErrorCode::UndeclaredSymbol, "undeclared symbol '" + name.text + "'",
                    name.location);
      }
      if (*kind == logic::SymbolKind::Predicate) ts_.fail("predicate '" + name.text + "' used as a term");
      if (*sig_->arity(name.text) != static_cast<int>(args.size())) {
        throw Error(ErrorCode::ArityMismatch,
                    "'" + name.text + "' expects " + std::to_string(*sig_->arity(name.text)) +
                        " argument(s), got " + std::to_string(args.size()),
                    name.location);
      }
    }
    p.kind = applied ? TK::Application : TK::Constant;
    p.args = std::move(args);
    return p;
  }

  void noteSchema(const Token& tok, SchemaKind kind) {
    auto [it, inserted] = out_.schemaVars.emplace(tok.text, kind);
    if (!inserted && it->second != kind) {
      throw Error(ErrorCode::SyntaxError,
                  "schema variable '?" + tok.text + "' used both as a term and as a formula",
                  tok.location);
    }
  }

  bool isBound(const std::string& name) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (*it == name) return true;
    return false;
  }

  logic::TokenStream& ts_;
  const logic::Signature* sig_;
  SequentPattern& out_;
  std::vector<std::string> bound_;
};

int precedence(const FormulaPattern& p) {
  switch (p.kind) {
    case FormulaPattern::Kind::Forall:
    case FormulaPattern::Kind::Exists: return 0;
    case FormulaPattern::Kind::Implies: return 1;
    case FormulaPattern::Kind::Or: return 2;
    case FormulaPattern::Kind::And: return 3;
    case FormulaPattern::Kind::Not: return 4;
    default: return 5;
  }
}

void print(std::string& out, const TermPattern& p) {
  switch (p.kind) {
    case TermPattern::Kind::Wildcard: out += '_'; return;
    case TermPattern::Kind::SchemaVar: out += '?' + p.name; return;
    default: out += p.name;
  }
  if (p.kind == TermPattern::Kind::Application) {
    out += '(';
    for (std::size_t i = 0; i < p.args.size(); ++i) {
      if (i) out += ", ";
      print(out, p.args[i]);
    }
    out += ')';
  }
}

void print(std::string& out, const FormulaPattern& p, int context) {
  using K = FormulaPattern::Kind;
  const int prec = precedence(p);
  const bool parens = prec == 0 ? context > 0 : prec < context;
  if (parens) out += '(';
  switch (p.kind) {
    case K::Wildcard: out += '_'; break;
    case K::SchemaVar: out += '?' + p.name; break;
    case K::Atom:
      out += p.name;
      if (!p.terms.empty()) {
        out += '(';
        for (std::size_t i = 0; i < p.terms.size(); ++i) {
          if (i) out += ", ";
          print(out, p.terms[i]);
        }
        out += ')';
      }
      break;
    case K::Equality:
      print(out, p.terms[0]);
      out += " = ";
      print(out, p.terms[1]);
      break;
    case K::True: out += "true"; break;
    case K::False: out += "false"; break;
    case K::Not:
      out += '!';
      print(out, p.children[0], 4);
      break;
    case K::And:
      print(out, p.children[0], 3);
      out += " & ";
      print(out, p.children[1], 4);
      break;
    case K::Or:
      print(out, p.children[0], 2);
      out += " | ";
      print(out, p.children[1], 3);
      break;
    case K::Implies:
      print(out, p.children[0], 2);
      out += " -> ";
      print(out, p.children[1], 1);
      break;
    case K::Forall:
    case K::Exists:
      out += p.kind == K::Forall ? "\\forall " : "\\exists ";
      if (p.binder == FormulaPattern::Binder::SchemaVar) out += '?';
      out += p.binder == FormulaPattern::Binder::Wildcard ? std::string("_") : p.name;
      out += ". ";
      print(out, p.children[0], 0);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

SequentPattern parsePattern(std::string_view text, const logic::Signature* sig, SourceLocation origin) {
  logic::TokenStream ts(logic::tokenize(text, origin));
  SequentPattern out;
  PatternParser parser(ts, sig, out);
  out.antecedent = parser.list();
  ts.expect(TokenKind::SequentArrow, "'==>'");
  out.succedent = parser.list();
  if (!ts.at(TokenKind::End)) ts.fail("unexpected '" + ts.peek().text + "' in pattern");
  return out;
}

std::string toString(const TermPattern& p) {
  std::string out;
  print(out, p);
  return out;
}

std::string toString(const FormulaPattern& p) {
  std::string out;
  print(out, p, 0);
  return out;
}

std::string toString(const SequentPattern& p) {
  std::string out;
  for (std::size_t i = 0; i < p.antecedent.size(); ++i) {
    if (i) out += ", ";
    print(out, p.antecedent[i], 0);
  }
  out += p.antecedent.empty() ? "==>" : " ==>";
  for (std::size_t i = 0; i < p.succedent.size(); ++i) {
    out += i ? ", " : " ";
    print(out, p.succedent[i], 0);
  }
  return out;
}

}  // namespace psdbg::matcher
