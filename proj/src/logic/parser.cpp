#include "psdbg/logic/parser.hpp"

#include <charconv>

#include "psdbg/logic/lexer.hpp"

namespace psdbg::logic {

namespace {

class FormulaParser {
 public:
  FormulaParser(TokenStream& ts, const Signature& sig) : ts_(ts), sig_(sig) {}

  Formula formula() { return implication(); }

  Term term() {
    const Token name = ts_.expect(TokenKind::Ident, "a term");
    std::vector<Term> args;
    bool applied = false;
    if (ts_.accept(TokenKind::LParen)) {
      applied = true;
      args = termList();
    }
    return resolveTerm(name, applied, std::move(args));
  }

 private:
  Formula implication() {
    Formula lhs = disjunction();
    if (ts_.accept(TokenKind::Arrow)) return Formula::implication(lhs, implication());
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (ts_.accept(TokenKind::Pipe)) lhs = Formula::disjunction(lhs, conjunction());
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (ts_.accept(TokenKind::Amp)) lhs = Formula::conjunction(lhs, unary());
    return lhs;
  }

  Formula unary() {
    if (ts_.accept(TokenKind::Bang)) return Formula::negation(unary());
    if (ts_.at(TokenKind::Forall) || ts_.at(TokenKind::Exists)) {
      auto kind = ts_.next().kind == TokenKind::Forall ? Formula::Kind::Forall
                                                       : Formula::Kind::Exists;
      const Token var = ts_.expect(TokenKind::Ident, "a bound variable");
      ts_.expect(TokenKind::Dot);
      bound_.push_back(var.text);
      Formula body = formula();
      bound_.pop_back();
      return Formula::quantifier(kind, var.text, body);
    }
    return primary();
  }

  Formula primary() {
    if (ts_.accept(TokenKind::LParen)) {
      Formula f = formula();
      ts_.expect(TokenKind::RParen);
      return f;
    }
    const Token name = ts_.expect(TokenKind::Ident, "a formula");
    if (name.text == "true") return Formula::truth();
    if (name.text == "false") return Formula::falsity();
    std::vector<Term> args;
    bool applied = false;
    if (ts_.accept(TokenKind::LParen)) {
      applied = true;
      args = termList();
    }
    if (ts_.at(TokenKind::Equals)) {
      Term lhs = resolveTerm(name, applied, std::move(args));
      ts_.next();
      return Formula::equality(lhs, term());
    }
    if (isBound(name.text) || sig_.kindOf(name.text).value_or(SymbolKind::Predicate) !=
                                  SymbolKind::Predicate) {
      ts_.fail("expected '=' after term '" + name.text + "'");
    }
    auto arity = sig_.arity(name.text);
    if (!arity) {
      throw Error(ErrorCode::UndeclaredSymbol, "undeclared predicate '" + name.text + "'",
                  name.location);
    }
    if (*arity != static_cast<int>(args.size())) {
      throw Error(ErrorCode::ArityMismatch,
                  "predicate '" + name.text + "' expects " + std::to_string(*arity) +
                      " argument(s), got " + std::to_string(args.size()),
                  name.location);
    }
    return Formula::atom(name.text, std::move(args));
  }

  std::vector<Term> termList() {
    std::vector<Term> args;
    args.push_back(term());
    while (ts_.accept(TokenKind::Comma)) args.push_back(term());
    ts_.expect(TokenKind::RParen);
    return args;
  }

  bool isBound(const std::string& name) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      if (*it == name) return true;
    }
    return false;
  }

  Term resolveTerm(const Token& name, bool applied, std::vector<Term> args) {
    if (!applied && isBound(name.text)) return Term::variable(name.text);
    auto kind = sig_.kindOf(name.text);
    if (!kind) {
      throw Error(ErrorCode::UndeclaredSymbol, "undeclared symbol '" + name.text + "'",
                  name.location);
    }
    if (*kind == SymbolKind::Predicate) {
      ts_.fail("predicate '" + name.text + "' used as a term");
    }
    int arity = *sig_.arity(name.text);
    if (arity != static_cast<int>(args.size()) || (applied && arity == 0)) {
      throw Error(ErrorCode::ArityMismatch,
                  "'" + name.text + "' expects " + std::to_string(arity) + " argument(s), got " +
                      std::to_string(args.size()),
                  name.location);
    }
    if (*kind == SymbolKind::Constant) return Term::constant(name.text);
    return Term::application(name.text, std::move(args));
  }

  TokenStream& ts_;
  const Signature& sig_;
  std::vector<std::string> bound_;
};

int parseArity(TokenStream& ts) {
  const Token& tok = ts.expect(TokenKind::Number, "an arity");
  int value = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
  if (ec != std::errc()) throw Error(ErrorCode::SyntaxError, "arity out of range", tok.location);
  return value;
}

void declare(Signature& sig, const Token& name, SymbolKind kind, int arity) {
  try {
    switch (kind) {
      case SymbolKind::Constant: sig.declareConstant(name.text); break;
      case SymbolKind::Function: sig.declareFunction(name.text, arity); break;
      case SymbolKind::Predicate: sig.declarePredicate(name.text, arity); break;
    }
  } catch (const Error& e) {
    throw Error(e.code(), e.message(), name.location);
  }
}

}  // namespace

Problem parseProblem(std::string_view text) {
  TokenStream ts(tokenize(text));
  Problem problem;
  problem.sourceText = std::string(text);
  while (true) {
    if (ts.at(TokenKind::End)) ts.fail("expected 'conjecture'");
    const Token keyword = ts.expect(TokenKind::Ident, "a declaration");
    if (keyword.text == "const") {
      declare(problem.signature, ts.expect(TokenKind::Ident, "a constant name"),
              SymbolKind::Constant, 0);
    } else if (keyword.text == "fun") {
      const Token name = ts.expect(TokenKind::Ident, "a function name");
      ts.expect(TokenKind::Slash);
      declare(problem.signature, name, SymbolKind::Function, parseArity(ts));
    } else if (keyword.text == "pred") {
      const Token name = ts.expect(TokenKind::Ident, "a predicate name");
      int arity = 0;
      if (ts.accept(TokenKind::Slash)) arity = parseArity(ts);
      declare(problem.signature, name, SymbolKind::Predicate, arity);
    } else if (keyword.text == "assume" || keyword.text == "conjecture") {
      SourceLocation at = ts.peek().location;
      Formula f = FormulaParser(ts, problem.signature).formula();
      auto free = freeVariables(f);
      if (!free.empty()) {
        throw Error(ErrorCode::FreeVariable, "free variable '" + *free.begin() + "'", at);
      }
      ts.expect(TokenKind::Semicolon);
      if (keyword.text == "conjecture") {
        problem.conjecture = f;
        break;
      }
      problem.assumptions.push_back(f);
      continue;
    } else {
      throw Error(ErrorCode::SyntaxError, "unknown declaration '" + keyword.text + "'",
                  keyword.location);
    }
    ts.expect(TokenKind::Semicolon);
  }
  if (!ts.at(TokenKind::End)) ts.fail("unexpected text after the conjecture");
  return problem;
}

Formula parseFormula(std::string_view text, const Signature& sig, SourceLocation origin) {
  TokenStream ts(tokenize(text, origin));
  Formula f = FormulaParser(ts, sig).formula();
  if (!ts.at(TokenKind::End)) ts.fail("unexpected '" + ts.peek().text + "'");
  return f;
}

Term parseTerm(std::string_view text, const Signature& sig, SourceLocation origin) {
  TokenStream ts(tokenize(text, origin));
  Term t = FormulaParser(ts, sig).term();
  if (!ts.at(TokenKind::End)) ts.fail("unexpected '" + ts.peek().text + "'");
  return t;
}

Sequent parseSequent(std::string_view text, const Signature& sig, SourceLocation origin) {
  TokenStream ts(tokenize(text, origin));
  FormulaParser parser(ts, sig);
  auto side = [&](std::vector<Formula>& out, TokenKind stop) {
    if (ts.at(stop)) return;
    out.push_back(parser.formula());
    while (ts.accept(TokenKind::Comma)) out.push_back(parser.formula());
  };
  Sequent s;
  side(s.antecedent, TokenKind::SequentArrow);
  ts.expect(TokenKind::SequentArrow);
  side(s.succedent, TokenKind::End);
  if (!ts.at(TokenKind::End)) ts.fail("unexpected '" + ts.peek().text + "'");
  return s;
}

std::variant<Term, Formula> parseTermOrFormula(std::string_view text, const Signature& sig,
                                               SourceLocation origin) {
  // Names are disjoint across symbol kinds, so at most one reading succeeds.
  try {
    return parseFormula(text, sig, origin);
  } catch (const Error& formulaError) {
    try {
      return parseTerm(text, sig, origin);
    } catch (const Error&) {
      throw formulaError;
    }
  }
}

}  // namespace psdbg::logic
