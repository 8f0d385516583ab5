#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "testmap/error.hpp"

namespace testmap::java {

enum class TokenKind { Identifier, Keyword, Literal, Punct };

/// One lexical token. `text` views into the lexed source, which must outlive the token.
struct Token {
  TokenKind kind;
  std::string_view text;
  std::size_t begin;  // byte offset
  std::size_t end;    // one past the last byte
  int line;           // 1-based

  bool is(std::string_view s) const { return kind != TokenKind::Literal && text == s; }
  bool is_ident() const { return kind == TokenKind::Identifier; }
};

class LexError : public Error {
 public:
  LexError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

/// Splits Java source into tokens, dropping whitespace and comments. `>` is always a
/// single-character token so nested generics close one level at a time.
std::vector<Token> lex(std::string_view source);

bool is_keyword(std::string_view word);
bool is_primitive_type(std::string_view word);

/// Collapses every whitespace run to a single space and trims both ends.
std::string collapse_whitespace(std::string_view text);

/// Comment-free, whitespace-normalized rendering of a code fragment: tokens are joined by
/// a single space wherever the source separates them and kept adjacent otherwise. Falls back
/// to collapse_whitespace when the fragment does not lex.
std::string normalize_code(std::string_view text);

}  // namespace testmap::java
