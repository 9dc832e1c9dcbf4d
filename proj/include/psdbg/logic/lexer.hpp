#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "psdbg/error.hpp"

namespace psdbg::logic {

enum class TokenKind {
  Ident,
  Number,
  SchemaVar,  // ?X, text holds "X"
  LParen,
  RParen,
  Comma,
  Dot,
  Semicolon,
  Slash,
  Bang,
  Amp,
  Pipe,
  Arrow,         // ->
  Equals,        // =
  SequentArrow,  // ==>
  Forall,        // \forall
  Exists,        // \exists
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  SourceLocation location;
};

std::string_view describe(TokenKind kind);

/// Tokenizes formula, problem-file, and pattern text. `origin` is the
/// location of the first character, so text embedded in a script reports
/// positions relative to the enclosing file.
std::vector<Token> tokenize(std::string_view text, SourceLocation origin = {1, 1});

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at(TokenKind kind) const { return peek().kind == kind; }
  bool atIdent(std::string_view text) const {
    return peek().kind == TokenKind::Ident && peek().text == text;
  }
  bool accept(TokenKind kind);
  const Token& expect(TokenKind kind, std::string_view what = {});
  [[noreturn]] void fail(const std::string& message) const;

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace psdbg::logic
