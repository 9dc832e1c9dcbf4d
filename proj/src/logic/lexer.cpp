#include "psdbg/logic/lexer.hpp"

#include <cctype>

namespace psdbg::logic {

std::string_view describe(TokenKind kind) {
  switch (kind) {
    case TokenKind::Ident: return "identifier";
    case TokenKind::Number: return "number";
    case TokenKind::SchemaVar: return "schema variable";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::Comma: return "','";
    case TokenKind::Dot: return "'.'";
    case TokenKind::Semicolon: return "';'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Bang: return "'!'";
    case TokenKind::Amp: return "'&'";
    case TokenKind::Pipe: return "'|'";
    case TokenKind::Arrow: return "'->'";
    case TokenKind::Equals: return "'='";
    case TokenKind::SequentArrow: return "'==>'";
    case TokenKind::Forall: return "'\\forall'";
    case TokenKind::Exists: return "'\\exists'";
    case TokenKind::End: return "end of input";
  }
  return "?";
}

namespace {

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

}  // namespace

std::vector<Token> tokenize(std::string_view text, SourceLocation origin) {
  std::vector<Token> out;
  SourceLocation loc = origin;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++loc.line;
        loc.column = 1;
      } else {
        ++loc.column;
      }
    }
  };
  auto push = [&](TokenKind kind, std::size_t len, std::string value) {
    out.push_back(Token{kind, std::move(value), loc});
    advance(len);
  };

  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    if (identStart(c)) {
      std::size_t j = i;
      while (j < text.size() && identChar(text[j])) ++j;
      push(TokenKind::Ident, j - i, std::string(text.substr(i, j - i)));
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      push(TokenKind::Number, j - i, std::string(text.substr(i, j - i)));
      continue;
    }
    if (c == '?') {
      std::size_t j = i + 1;
      if (j >= text.size() || !identStart(text[j])) {
        throw Error(ErrorCode::SyntaxError, "expected a name after '?'", loc);
      }
      while (j < text.size() && identChar(text[j])) ++j;
      push(TokenKind::SchemaVar, j - i, std::string(text.substr(i + 1, j - i - 1)));
      continue;
    }
    if (c == '\\') {
      if (text.substr(i, 7) == "\\forall" && (i + 7 >= text.size() || !identChar(text[i + 7]))) {
        push(TokenKind::Forall, 7, "\\forall");
        continue;
      }
      if (text.substr(i, 7) == "\\exists" && (i + 7 >= text.size() || !identChar(text[i + 7]))) {
        push(TokenKind::Exists, 7, "\\exists");
        continue;
      }
      throw Error(ErrorCode::SyntaxError, "unknown keyword after '\\'", loc);
    }
    if (text.substr(i, 3) == "==>") {
      push(TokenKind::SequentArrow, 3, "==>");
      continue;
    }
    if (text.substr(i, 2) == "->") {
      push(TokenKind::Arrow, 2, "->");
      continue;
    }
    TokenKind kind;
    switch (c) {
      case '(': kind = TokenKind::LParen; break;
      case ')': kind = TokenKind::RParen; break;
      case ',': kind = TokenKind::Comma; break;
      case '.': kind = TokenKind::Dot; break;
      case ';': kind = TokenKind::Semicolon; break;
      case '/': kind = TokenKind::Slash; break;
      case '!': kind = TokenKind::Bang; break;
      case '&': kind = TokenKind::Amp; break;
      case '|': kind = TokenKind::Pipe; break;
      case '=': kind = TokenKind::Equals; break;
      default:
        throw Error(ErrorCode::SyntaxError, std::string("unexpected character '") + c + "'", loc);
    }
    push(kind, 1, std::string(1, c));
  }
  out.push_back(Token{TokenKind::End, {}, loc});
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t idx = pos_ + ahead;
  return idx < tokens_.size() ? tokens_[idx] : tokens_.back();
}

const Token& TokenStream::next() {
  const Token& t = tokens_[pos_];
  if (pos_ + 1 < tokens_.size()) ++pos_;
  return t;
}

bool TokenStream::accept(TokenKind kind) {
  if (!at(kind)) return false;
  next();
  return true;
}

const Token& TokenStream::expect(TokenKind kind, std::string_view what) {
  if (!at(kind)) {
    std::string message = "expected ";
    message += what.empty() ? describe(kind) : what;
    message += ", found ";
    message += peek().kind == TokenKind::End ? std::string("end of input") : "'" + peek().text + "'";
    fail(message);
  }
  return next();
}

void TokenStream::fail(const std::string& message) const {
  throw Error(ErrorCode::SyntaxError, message, peek().location);
}

}  // namespace psdbg::logic
