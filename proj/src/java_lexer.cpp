#include "testmap/java_lexer.hpp"

#include <algorithm>
#include <array>

namespace testmap::java {

namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract",  "assert",     "boolean",   "break",     "byte",         "case",
    "catch",     "char",       "class",     "const",     "continue",     "default",
    "do",        "double",     "else",      "enum",      "extends",      "final",
    "finally",   "float",      "for",       "goto",      "if",           "implements",
    "import",    "instanceof", "int",       "interface", "long",         "native",
    "new",       "package",    "private",   "protected", "public",       "return",
    "short",     "static",     "strictfp",  "super",     "switch",       "synchronized",
    "this",      "throw",      "throws",    "transient", "try",          "void",
    "volatile",  "while",      "true",      "false",     "null"};

constexpr std::array<std::string_view, 9> kPrimitives = {"boolean", "byte", "char",  "short", "int",
                                                         "long",    "float", "double", "void"};

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || is_digit(c); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    // UTF-8 byte order mark
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    return out;
  }

 private:
  unsigned char at(std::size_t i) const {
    return i < src_.size() ? static_cast<unsigned char>(src_[i]) : 0;
  }

  void advance() {
    if (src_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      unsigned char c = at(pos_);
      if (is_space(c)) {
        advance();
      } else if (c == '/' && at(pos_ + 1) == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && at(pos_ + 1) == '*') {
        int start_line = line_;
        pos_ += 2;
        while (pos_ < src_.size() && !(src_[pos_] == '*' && at(pos_ + 1) == '/')) advance();
        if (pos_ >= src_.size()) throw LexError(start_line, "unterminated block comment");
        pos_ += 2;
      } else {
        return;
      }
    }
  }

  Token make(TokenKind kind, std::size_t begin, int line) const {
    return Token{kind, src_.substr(begin, pos_ - begin), begin, pos_, line};
  }

  Token next() {
    std::size_t begin = pos_;
    int line = line_;
    unsigned char c = at(pos_);

    if (is_ident_start(c)) {
      while (pos_ < src_.size() && is_ident_part(at(pos_))) ++pos_;
      auto word = src_.substr(begin, pos_ - begin);
      return make(is_keyword(word) ? TokenKind::Keyword : TokenKind::Identifier, begin, line);
    }
    if (is_digit(c) || (c == '.' && is_digit(at(pos_ + 1)))) {
      lex_number();
      return make(TokenKind::Literal, begin, line);
    }
    if (c == '"') {
      if (at(pos_ + 1) == '"' && at(pos_ + 2) == '"') {
        lex_text_block(line);
      } else {
        lex_quoted('"', line);
      }
      return make(TokenKind::Literal, begin, line);
    }
    if (c == '\'') {
      lex_quoted('\'', line);
      return make(TokenKind::Literal, begin, line);
    }

    auto rest = src_.substr(pos_);
    for (std::string_view op : {"...", "::", "->"}) {
      if (rest.substr(0, op.size()) == op) {
        pos_ += op.size();
        return make(TokenKind::Punct, begin, line);
      }
    }
    static constexpr std::string_view kSingle = "(){}[];,.@=<>!~?:+-*/&|^%";
    if (kSingle.find(static_cast<char>(c)) == std::string_view::npos) {
      throw LexError(line, std::string("unexpected character '") + static_cast<char>(c) + "'");
    }
    ++pos_;
    return make(TokenKind::Punct, begin, line);
  }

  void lex_number() {
    bool hex = at(pos_) == '0' && (at(pos_ + 1) == 'x' || at(pos_ + 1) == 'X');
    while (pos_ < src_.size()) {
      unsigned char c = at(pos_);
      if (is_ident_part(c) || c == '.') {
        bool exponent = hex ? (c == 'p' || c == 'P') : (c == 'e' || c == 'E');
        ++pos_;
        if (exponent && (at(pos_) == '+' || at(pos_) == '-')) ++pos_;
      } else {
        break;
      }
    }
  }

  void lex_quoted(char quote, int start_line) {
    ++pos_;
    while (true) {
      if (pos_ >= src_.size() || src_[pos_] == '\n') {
        throw LexError(start_line, quote == '"' ? "unterminated string literal"
                                                : "unterminated character literal");
      }
      char c = src_[pos_];
      if (c == '\\') {
        pos_ += 2;
        continue;
      }
      ++pos_;
      if (c == quote) return;
    }
  }

  void lex_text_block(int start_line) {
    pos_ += 3;
    while (pos_ < src_.size()) {
      if (src_[pos_] == '\\') {
        advance();
        if (pos_ < src_.size()) advance();
        continue;
      }
      if (src_.substr(pos_, 3) == "\"\"\"") {
        pos_ += 3;
        return;
      }
      advance();
    }
    throw LexError(start_line, "unterminated text block");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

}  // namespace

LexError::LexError(int line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

std::vector<Token> lex(std::string_view source) { return Lexer(source).run(); }

bool is_keyword(std::string_view word) {
  return std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end();
}

bool is_primitive_type(std::string_view word) {
  return std::find(kPrimitives.begin(), kPrimitives.end(), word) != kPrimitives.end();
}

std::string collapse_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    if (is_space(static_cast<unsigned char>(ch))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(ch);
  }
  return out;
}

std::string normalize_code(std::string_view text) {
  std::vector<Token> tokens;
  try {
    tokens = lex(text);
  } catch (const LexError&) {
    return collapse_whitespace(text);
  }
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && tokens[i].begin > tokens[i - 1].end) out.push_back(' ');
    // Text blocks may span lines; their content is code too.
    if (tokens[i].kind == TokenKind::Literal && tokens[i].text.starts_with("\"\"\"")) {
      for (char ch : tokens[i].text) out.push_back(ch == '\n' || ch == '\r' ? ' ' : ch);
    } else {
      out.append(tokens[i].text);
    }
  }
  return out;
}

}  // namespace testmap::java
