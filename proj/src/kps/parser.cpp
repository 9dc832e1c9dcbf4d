#include <cctype>
#include <charconv>
#include <set>

#include "psdbg/kps/ast.hpp"

namespace psdbg::kps {

namespace {

enum class Tok {
  Ident,
  Int,
  String,
  Backtick,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Semicolon,
  Colon,
  Assign,  // :=
  Equals,  // =
  Op,      // == != < <= > >= + - ! && ||
  Comma,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
  std::size_t offset;
  int endLine;
  int endColumn;
  std::size_t endOffset;
};

const std::set<std::string, std::less<>> kKeywords = {"script", "foreach", "theonly", "cases", "case",
                                                      "match",  "default", "true",    "false"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skipTrivia();
      Token t{Tok::End, "", line_, column_, pos_, 0, 0, 0};
      if (pos_ >= text_.size()) {
        finish(t);
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || text_[pos_] == '.')) {
          advance();
        }
        if (text_[pos_ - 1] == '.') fail(t, "identifier may not end with '.'");
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        t.kind = Tok::Int;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (c == '"') {
        advance();
        t.kind = Tok::String;
        while (true) {
          if (pos_ >= text_.size() || text_[pos_] == '\n') fail(t, "unterminated string");
          char d = text_[pos_];
          advance();
          if (d == '"') break;
          if (d == '\\') {
            if (pos_ >= text_.size()) fail(t, "unterminated string");
            char e = text_[pos_];
            advance();
            if (e == 'n') {
              t.text += '\n';
            } else if (e == '"' || e == '\\') {
              t.text += e;
            } else {
              fail(t, std::string("unknown escape '\\") + e + "'");
            }
          } else {
            t.text += d;
          }
        }
      } else if (c == '`') {
        advance();
        t.kind = Tok::Backtick;
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '`') advance();
        if (pos_ >= text_.size()) fail(t, "unterminated pattern literal");
        t.text = std::string(text_.substr(start, pos_ - start));
        advance();
      } else {
        t.kind = Tok::Op;
        auto two = text_.substr(pos_, 2);
        if (two == ":=") {
          t.kind = Tok::Assign;
        } else if (two == "==" || two == "!=" || two == "<=" || two == ">=" || two == "&&" || two == "||") {
        } else {
          two = text_.substr(pos_, 1);
          switch (c) {
            case '{': t.kind = Tok::LBrace; break;
            case '}': t.kind = Tok::RBrace; break;
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case ';': t.kind = Tok::Semicolon; break;
            case ':': t.kind = Tok::Colon; break;
            case '=': t.kind = Tok::Equals; break;
            case ',': t.kind = Tok::Comma; break;
            case '<':
            case '>':
            case '+':
            case '-':
            case '!': break;
            default: fail(t, std::string("unexpected character '") + c + "'");
          }
        }
        t.text = std::string(two);
        for (std::size_t i = 0; i < two.size(); ++i) advance();
      }
      finish(t);
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skipTrivia() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else if (text_.substr(pos_, 2) == "//") {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void finish(Token& t) const {
    t.endLine = line_;
    t.endColumn = column_;
    t.endOffset = pos_;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw Error(ErrorCode::SyntaxError, msg, SourceLocation{at.line, at.column});
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::String: return "string";
    case Tok::Backtick: return "pattern literal";
    default: return "'" + t.text + "'";
  }
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  std::vector<Script> file() {
    std::vector<Script> scripts;
    std::set<std::string> names;
    while (peek().kind != Tok::End) {
      Script s = script();
      if (!names.insert(s.name).second) {
        throw Error(ErrorCode::SyntaxError, "duplicate script '" + s.name + "'", s.span.begin());
      }
      scripts.push_back(std::move(s));
    }
    if (scripts.empty()) fail({"'script'"});
    return scripts;
  }

  Expr standaloneExpr() {
    Expr e = expr();
    if (peek().kind != Tok::End) fail({"end of expression"});
    return e;
  }

 private:
  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  const Token& previous() const { return toks_[pos_ - 1]; }

  bool atKeyword(std::string_view kw) const { return peek().kind == Tok::Ident && peek().text == kw; }
  bool atOp(std::string_view op) const { return peek().kind == Tok::Op && peek().text == op; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    std::string msg = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += i + 1 == expected.size() ? " or " : ", ";
      msg += expected[i];
    }
    msg += ", found " + describe(peek());
    throw Error(ErrorCode::SyntaxError, msg, SourceLocation{peek().line, peek().column});
  }

  const Token& expect(Tok kind, const std::string& what) {
    if (peek().kind != kind) fail({what});
    return next();
  }

  void expectKeyword(std::string_view kw) {
    if (!atKeyword(kw)) fail({"'" + std::string(kw) + "'"});
    next();
  }

  std::string identifier(const std::string& what) {
    const Token& t = expect(Tok::Ident, what);
    if (kKeywords.count(t.text)) {
      throw Error(ErrorCode::SyntaxError, "expected " + what + ", found keyword '" + t.text + "'",
                  SourceLocation{t.line, t.column});
    }
    return t.text;
  }

  SourceSpan spanFrom(const Token& first) const {
    const Token& last = previous();
    return SourceSpan{first.line, first.column, last.endLine, last.endColumn, first.offset, last.endOffset};
  }

  Script script() {
    const Token first = peek();
    expectKeyword("script");
    Script s;
    s.name = identifier("a script name");
    expect(Tok::LParen, "'('");
    std::set<std::string> seen;
    if (peek().kind != Tok::RParen) {
      do {
        const Token at = peek();
        Parameter p;
        p.name = identifier("a parameter name");
        if (!seen.insert(p.name).second) {
          throw Error(ErrorCode::SyntaxError, "duplicate parameter '" + p.name + "'", SourceLocation{at.line, at.column});
        }
        if (peek().kind == Tok::Equals) {
          next();
          p.defaultValue = expr();
        }
        s.params.push_back(std::move(p));
      } while (peek().kind == Tok::Comma && (next(), true));
    }
    expect(Tok::RParen, "')'");
    script_ = s.name;
    counter_ = 0;
    s.body = block();
    s.span = spanFrom(first);
    return s;
  }

  Block block() {
    expect(Tok::LBrace, "'{'");
    Block b;
    while (peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail({"a statement", "'}'"});
      b.push_back(statement());
    }
    next();
    return b;
  }

  Statement statement() {
    const Token first = peek();
    Statement s;
    s.id = StatementId{script_, counter_++};
    if (atKeyword("foreach") || atKeyword("theonly")) {
      s.kind = next().text == "foreach" ? Statement::Kind::Foreach : Statement::Kind::TheOnly;
      s.body = block();
    } else if (atKeyword("cases")) {
      next();
      s.kind = Statement::Kind::Cases;
      expect(Tok::LBrace, "'{'");
      if (!atKeyword("case")) fail({"'case'"});
      while (atKeyword("case")) {
        const Token caseTok = next();
        CaseBranch c;
        expectKeyword("match");
        const Token& lit = expect(Tok::Backtick, "a pattern literal");
        c.pattern = lit.text;
        c.patternSpan = SourceSpan{lit.line, lit.column, lit.endLine, lit.endColumn, lit.offset, lit.endOffset};
        expect(Tok::Colon, "':'");
        c.body = caseBody();
        c.span = spanFrom(caseTok);
        s.cases.push_back(std::move(c));
      }
      if (atKeyword("default")) {
        const Token defTok = next();
        expect(Tok::Colon, "':'");
        s.defaultBlock = caseBody();
        s.defaultSpan = spanFrom(defTok);
      }
      if (peek().kind != Tok::RBrace) fail({"'case'", "'default'", "'}'"});
      next();
    } else {
      s.name = identifier("a statement");
      if (peek().kind == Tok::Assign) {
        next();
        s.kind = Statement::Kind::Assignment;
        s.value = expr();
      } else if (peek().kind == Tok::LParen) {
        next();
        s.kind = Statement::Kind::ScriptCall;
        if (peek().kind != Tok::RParen) {
          do {
            s.args.push_back(argument(s));
          } while (peek().kind == Tok::Comma && (next(), true));
        }
        expect(Tok::RParen, "')'");
      } else {
        s.kind = Statement::Kind::Command;
        while (peek().kind == Tok::Ident) s.args.push_back(argument(s));
      }
      if (peek().kind != Tok::Semicolon) {
        if (s.kind == Statement::Kind::Command) fail({"an argument", "';'"});
        fail({"';'"});
      }
      next();
    }
    s.span = spanFrom(first);
    return s;
  }

  Argument argument(const Statement& owner) {
    const Token at = peek();
    Argument a;
    a.name = identifier("an argument name");
    for (const Argument& other : owner.args) {
      if (other.name == a.name) {
        throw Error(ErrorCode::SyntaxError, "duplicate argument '" + a.name + "'", SourceLocation{at.line, at.column});
      }
    }
    expect(Tok::Equals, "'='");
    a.value = expr();
    return a;
  }

  Block caseBody() {
    Block b;
    while (!atKeyword("case") && !atKeyword("default") && peek().kind != Tok::RBrace) {
      if (peek().kind == Tok::End) fail({"a statement", "'}'"});
      b.push_back(statement());
    }
    if (b.empty()) fail({"a statement"});
    return b;
  }

  // expr := or; or := and ("||" and)*; and := cmp ("&&" cmp)*;
  // cmp := add (relop add)?; add := unary (("+"|"-") unary)*
  Expr expr() { return orExpr(); }

  Expr orExpr() {
    Expr lhs = andExpr();
    while (atOp("||")) lhs = combine(std::move(lhs), &Parser::andExpr);
    return lhs;
  }

  Expr andExpr() {
    Expr lhs = cmpExpr();
    while (atOp("&&")) lhs = combine(std::move(lhs), &Parser::cmpExpr);
    return lhs;
  }

  Expr cmpExpr() {
    Expr lhs = addExpr();
    if (atOp("==") || atOp("!=") || atOp("<") || atOp("<=") || atOp(">") || atOp(">=")) {
      lhs = combine(std::move(lhs), &Parser::addExpr);
    }
    return lhs;
  }

  Expr addExpr() {
    Expr lhs = unaryExpr();
    while (atOp("+") || atOp("-")) lhs = combine(std::move(lhs), &Parser::unaryExpr);
    return lhs;
  }

  Expr combine(Expr lhs, Expr (Parser::*rhsParser)()) {
    std::string op = next().text;
    Expr rhs = (this->*rhsParser)();
    SourceSpan span = lhs.span;
    span.endLine = rhs.span.endLine;
    span.endColumn = rhs.span.endColumn;
    span.endOffset = rhs.span.endOffset;
    Expr e = Expr::binary(std::move(op), std::move(lhs), std::move(rhs));
    e.span = span;
    return e;
  }

  Expr unaryExpr() {
    const Token first = peek();
    if (atOp("!") || atOp("-")) {
      std::string op = next().text;
      Expr e = Expr::unary(std::move(op), unaryExpr());
      e.span = spanFrom(first);
      return e;
    }
    Expr e;
    switch (first.kind) {
      case Tok::Int: {
        std::int64_t v = 0;
        auto [ptr, ec] = std::from_chars(first.text.data(), first.text.data() + first.text.size(), v);
        if (ec != std::errc()) {
          throw Error(ErrorCode::SyntaxError, "integer literal out of range", SourceLocation{first.line, first.column});
        }
        next();
        e = Expr::integer(v);
        break;
      }
      case Tok::String:
        e = Expr::string(next().text);
        break;
      case Tok::Backtick:
        e = Expr::termLit(next().text);
        break;
      case Tok::Ident:
        if (first.text == "true" || first.text == "false") {
          e = Expr::boolean(next().text == "true");
        } else {
          e = Expr::var(identifier("an expression"));
        }
        break;
      case Tok::LParen:
        next();
        e = expr();
        expect(Tok::RParen, "')'");
        break;
      default: fail({"an expression"});
    }
    e.span = spanFrom(first);
    return e;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::string script_;
  int counter_ = 0;
};

void collect(const Block& b, std::vector<const Statement*>& out) {
  for (const Statement& s : b) {
    out.push_back(&s);
    collect(s.body, out);
    for (const CaseBranch& c : s.cases) collect(c.body, out);
    if (s.defaultBlock) collect(*s.defaultBlock, out);
  }
}

}  // namespace

std::string toString(const StatementId& id) { return id.script + "#" + std::to_string(id.index); }

Expr Expr::integer(std::int64_t v) {
  Expr e;
  e.kind = Kind::Int;
  e.intValue = v;
  return e;
}

Expr Expr::boolean(bool v) {
  Expr e;
  e.kind = Kind::Bool;
  e.boolValue = v;
  return e;
}

Expr Expr::string(std::string v) {
  Expr e;
  e.kind = Kind::String;
  e.text = std::move(v);
  return e;
}

Expr Expr::termLit(std::string text) {
  Expr e;
  e.kind = Kind::TermLit;
  e.text = std::move(text);
  return e;
}

Expr Expr::var(std::string name) {
  Expr e;
  e.kind = Kind::VarRef;
  e.text = std::move(name);
  return e;
}

Expr Expr::unary(std::string op, Expr operand) {
  Expr e;
  e.kind = Kind::Unary;
  e.text = std::move(op);
  e.operands.push_back(std::move(operand));
  return e;
}

Expr Expr::binary(std::string op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.text = std::move(op);
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

const Argument* Statement::arg(std::string_view argName) const {
  for (const Argument& a : args)
    if (a.name == argName) return &a;
  return nullptr;
}

const Script* ScriptFile::find(std::string_view name) const {
  for (const Script& s : scripts)
    if (s.name == name) return &s;
  return nullptr;
}

const Statement* ScriptFile::statement(const StatementId& id) const {
  const Script* s = find(id.script);
  if (!s || id.index < 0) return nullptr;
  std::vector<const Statement*> all;
  collect(s->body, all);
  return static_cast<std::size_t>(id.index) < all.size() ? all[id.index] : nullptr;
}

std::vector<const Statement*> ScriptFile::allStatements() const {
  std::vector<const Statement*> out;
  for (const Script& s : scripts) collect(s.body, out);
  return out;
}

ScriptFile parseScript(std::string_view text) {
  ScriptFile file;
  file.scripts = Parser(Lexer(text).run()).file();
  file.sourceText = std::string(text);
  return file;
}

Expr parseExpression(std::string_view text) { return Parser(Lexer(text).run()).standaloneExpr(); }

}  // namespace psdbg::kps
