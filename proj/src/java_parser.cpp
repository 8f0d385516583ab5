#include "testmap/java_parser.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "testmap/java_lexer.hpp"

namespace testmap::java {

namespace {

namespace fs = std::filesystem;

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what) {}
};

constexpr std::string_view kModifierKeywords[] = {
    "public", "protected",    "private",   "static",   "abstract", "final",
    "native", "synchronized", "transient", "volatile", "strictfp", "default"};

bool is_modifier_keyword(std::string_view w) {
  return std::find(std::begin(kModifierKeywords), std::end(kModifierKeywords), w) !=
         std::end(kModifierKeywords);
}

struct Modifiers {
  std::vector<std::string> keywords;
  std::vector<std::string> annotations;
  std::size_t begin = 0;  // token index of the first modifier or annotation
};

struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive
  bool empty() const { return begin == end; }
};

class Parser {
 public:
  Parser(std::string_view source, std::vector<Token> tokens, std::string path)
      : src_(source), toks_(std::move(tokens)), path_(std::move(path)) {}

  std::vector<ClassInfo> parse_compilation_unit() {
    while (!eof()) {
      if (peek().is(";")) {
        ++pos_;
        continue;
      }
      if (peek().is("import")) {
        skip_past(";");
        continue;
      }
      if (peek().is_ident() && (peek().text == "module" || peek().text == "open") &&
          is_module_declaration()) {
        skip_module_declaration();
        continue;
      }
      Modifiers mods = parse_modifiers();
      if (peek().is("package")) {
        skip_past(";");
        continue;
      }
      if (!at_type_declaration()) fail("expected a type declaration");
      parse_type_declaration(mods);
    }
    return std::move(classes_);
  }

 private:
  // ---- token access ----

  bool eof() const { return pos_ >= toks_.size(); }

  const Token& peek(std::size_t k = 0) const {
    static const Token kEnd{TokenKind::Punct, "", 0, 0, 0};
    return pos_ + k < toks_.size() ? toks_[pos_ + k] : kEnd;
  }

  int current_line() const {
    if (!eof()) return peek().line;
    return toks_.empty() ? 1 : toks_.back().line;
  }

  [[noreturn]] void fail(const std::string& what) const {
    std::string found = eof() ? "end of file" : "'" + std::string(peek().text) + "'";
    throw ParseError(current_line(), what + ", found " + found);
  }

  const Token& expect(std::string_view text) {
    if (!peek().is(text)) fail("expected '" + std::string(text) + "'");
    return toks_[pos_++];
  }

  const Token& expect_identifier() {
    if (!peek().is_ident()) fail("expected identifier");
    return toks_[pos_++];
  }

  bool accept(std::string_view text) {
    if (peek().is(text)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_past(std::string_view terminator) {
    while (!eof() && !peek().is(terminator)) {
      if (peek().is("{") || peek().is("(") || peek().is("[")) {
        skip_balanced();
      } else {
        ++pos_;
      }
    }
    expect(terminator);
  }

  // ---- text helpers ----

  std::string verbatim(TokenRange r) const {
    if (r.empty()) return {};
    return std::string(src_.substr(toks_[r.begin].begin, toks_[r.end - 1].end - toks_[r.begin].begin));
  }

  std::string normalized(TokenRange r) const {
    std::string out;
    for (std::size_t i = r.begin; i < r.end; ++i) {
      if (i > r.begin && toks_[i].begin > toks_[i - 1].end) out.push_back(' ');
      out.append(toks_[i].text);
    }
    return out;
  }

  // ---- bracket handling ----

  static char closer_for(std::string_view open) {
    if (open == "(") return ')';
    if (open == "[") return ']';
    return '}';
  }

  /// Consumes a balanced (), [] or {} group starting at the current token and returns the
  /// index of its closing token. Mismatched or unterminated brackets are syntax errors.
  std::size_t skip_balanced() {
    std::vector<char> stack;
    int open_line = peek().line;
    do {
      const Token& t = peek();
      if (t.kind == TokenKind::Punct && t.text.size() == 1) {
        char c = t.text[0];
        if (c == '(' || c == '[' || c == '{') {
          stack.push_back(closer_for(t.text));
        } else if (c == ')' || c == ']' || c == '}') {
          if (stack.empty() || stack.back() != c) {
            throw ParseError(t.line, std::string("mismatched '") + c + "'");
          }
          stack.pop_back();
        }
      }
      ++pos_;
    } while (!stack.empty() && !eof());
    if (!stack.empty()) throw ParseError(open_line, "unbalanced bracket opened here");
    return pos_ - 1;
  }

  /// Skips a `<...>` type-parameter/argument list starting at the current `<`.
  void skip_angle_brackets() {
    int depth = 0;
    do {
      if (eof()) fail("unterminated type argument list");
      if (peek().is("<")) {
        ++depth;
      } else if (peek().is(">")) {
        --depth;
      } else if (peek().is("(") || peek().is("[") || peek().is("{")) {
        skip_balanced();
        continue;
      } else if (peek().is(";") || peek().is(")") || peek().is("}")) {
        fail("unterminated type argument list");
      }
      ++pos_;
    } while (depth > 0);
  }

  // ---- modifiers & annotations ----

  void parse_annotation(Modifiers& mods) {
    expect("@");
    std::string simple = std::string(expect_identifier().text);
    while (peek().is(".") && peek(1).is_ident()) {
      pos_ += 1;
      simple = std::string(expect_identifier().text);
    }
    if (peek().is("(")) skip_balanced();
    mods.annotations.push_back(std::move(simple));
  }

  Modifiers parse_modifiers() {
    Modifiers mods;
    mods.begin = pos_;
    while (!eof()) {
      const Token& t = peek();
      if (t.is("@") && !peek(1).is("interface")) {
        parse_annotation(mods);
      } else if (t.kind == TokenKind::Keyword && is_modifier_keyword(t.text) &&
                 !(t.text == "default" && peek(1).is(":"))) {
        mods.keywords.emplace_back(t.text);
        ++pos_;
      } else if (t.is_ident() && t.text == "sealed" &&
                 (peek(1).kind == TokenKind::Keyword || peek(1).is("@"))) {
        mods.keywords.emplace_back("sealed");
        ++pos_;
      } else if (t.is_ident() && t.text == "non" && peek(1).is("-") && peek(2).text == "sealed") {
        mods.keywords.emplace_back("non-sealed");
        pos_ += 3;
      } else {
        break;
      }
    }
    return mods;
  }

  // ---- types ----

  bool at_record_declaration() const {
    return peek().is_ident() && peek().text == "record" && peek(1).is_ident() &&
           (peek(2).is("(") || peek(2).is("<"));
  }

  bool at_type_declaration() const {
    return peek().is("class") || peek().is("interface") || peek().is("enum") ||
           (peek().is("@") && peek(1).is("interface")) || at_record_declaration();
  }

  TokenRange parse_type() {
    TokenRange r{pos_, pos_};
    Modifiers ignored;
    while (peek().is("@")) parse_annotation(ignored);
    if (peek().kind == TokenKind::Keyword && is_primitive_type(peek().text)) {
      ++pos_;
    } else {
      expect_identifier();
      if (peek().is("<")) skip_angle_brackets();
      while (peek().is(".") && (peek(1).is_ident() || peek(1).is("@"))) {
        ++pos_;
        while (peek().is("@")) parse_annotation(ignored);
        expect_identifier();
        if (peek().is("<")) skip_angle_brackets();
      }
    }
    skip_dims();
    r.end = pos_;
    return r;
  }

  void skip_dims() {
    while (true) {
      std::size_t save = pos_;
      Modifiers ignored;
      while (peek().is("@")) parse_annotation(ignored);
      if (peek().is("[") && peek(1).is("]")) {
        pos_ += 2;
      } else {
        pos_ = save;
        return;
      }
    }
  }

  TokenRange parse_type_list() {
    TokenRange r{pos_, pos_};
    parse_type();
    while (accept(",")) parse_type();
    r.end = pos_;
    return r;
  }

  // ---- declarations ----

  void parse_type_declaration(const Modifiers& /*mods*/) {
    std::size_t slot = classes_.size();
    classes_.emplace_back();
    ClassInfo cls;
    cls.file = path_;

    enum class Kind { Class, Interface, Enum, Record, Annotation } kind;
    if (accept("class")) {
      kind = Kind::Class;
    } else if (accept("interface")) {
      kind = Kind::Interface;
    } else if (accept("enum")) {
      kind = Kind::Enum;
    } else if (peek().is("@")) {
      pos_ += 2;
      kind = Kind::Annotation;
    } else {
      ++pos_;  // contextual "record"
      kind = Kind::Record;
    }
    cls.identifier = std::string(expect_identifier().text);
    if (peek().is("<")) skip_angle_brackets();
    if (kind == Kind::Record) {
      if (!peek().is("(")) fail("expected record components");
      skip_balanced();
    }

    while (true) {
      if (peek().is("extends")) {
        std::size_t b = pos_++;
        TokenRange list = kind == Kind::Class ? parse_type() : parse_type_list();
        std::string text = normalized({b, list.end});
        (kind == Kind::Class ? cls.superclass : cls.interfaces) = std::move(text);
      } else if (peek().is("implements")) {
        std::size_t b = pos_++;
        TokenRange list = parse_type_list();
        cls.interfaces = normalized({b, list.end});
      } else if (peek().is_ident() && peek().text == "permits") {
        ++pos_;
        parse_type_list();
      } else {
        break;
      }
    }

    if (kind == Kind::Enum) {
      parse_enum_body(cls);
    } else {
      parse_class_body(cls, kind == Kind::Record);
    }
    classes_[slot] = std::move(cls);
  }

  void parse_enum_body(ClassInfo& cls) {
    expect("{");
    while (!eof() && !peek().is(";") && !peek().is("}")) {
      Modifiers ignored;
      while (peek().is("@")) parse_annotation(ignored);
      expect_identifier();
      if (peek().is("(")) skip_balanced();
      if (peek().is("{")) skip_balanced();
      if (!accept(",")) break;
    }
    if (accept(";")) {
      parse_members(cls, false);
    }
    expect("}");
  }

  void parse_class_body(ClassInfo& cls, bool is_record) {
    expect("{");
    parse_members(cls, is_record);
    expect("}");
  }

  void parse_members(ClassInfo& cls, bool is_record) {
    while (!eof() && !peek().is("}")) {
      if (accept(";")) continue;
      if (peek().is("{")) {
        skip_balanced();
        continue;
      }
      if (peek().is("static") && peek(1).is("{")) {
        ++pos_;
        skip_balanced();
        continue;
      }
      Modifiers mods = parse_modifiers();
      if (at_type_declaration()) {
        parse_type_declaration(mods);
        continue;
      }
      parse_member(cls, mods, is_record);
    }
  }

  void parse_member(ClassInfo& cls, const Modifiers& mods, bool is_record) {
    TokenRange type_params{pos_, pos_};
    if (peek().is("<")) {
      skip_angle_brackets();
      type_params.end = pos_;
    }

    if (peek().is_ident() && peek().text == cls.identifier && peek(1).is("(")) {
      const Token& name = toks_[pos_++];
      parse_method_rest(cls, mods, type_params, {}, name, true);
      return;
    }
    if (is_record && peek().is_ident() && peek().text == cls.identifier && peek(1).is("{")) {
      const Token& name = toks_[pos_++];
      parse_method_rest(cls, mods, type_params, {}, name, true);
      return;
    }

    TokenRange type = parse_type();
    if (!peek().is_ident()) fail("expected member name");
    const Token& name = toks_[pos_++];
    if (peek().is("(")) {
      parse_method_rest(cls, mods, type_params, type, name, false);
      return;
    }
    if (!type_params.empty()) fail("type parameters on a field");
    parse_field_rest(cls, mods, type, name);
  }

  std::vector<Parameter> parse_parameters(TokenRange& inner) {
    std::vector<Parameter> params;
    expect("(");
    inner.begin = pos_;
    if (!peek().is(")")) {
      while (true) {
        parse_modifiers();
        TokenRange type = parse_type();
        std::string type_name = normalized(type);
        if (accept("...")) type_name += "...";
        std::string name;
        if (peek().is("this")) {
          name = "this";
          ++pos_;
        } else if (peek().is_ident() && peek(1).is(".") && peek(2).is("this")) {
          // receiver parameter of an inner-class constructor: Outer.this
          pos_ += 3;
          name = "this";
        } else {
          name = std::string(expect_identifier().text);
        }
        skip_dims();
        params.push_back({std::move(type_name), std::move(name)});
        if (!accept(",")) break;
      }
    }
    inner.end = pos_;
    expect(")");
    return params;
  }

  void parse_method_rest(ClassInfo& cls, const Modifiers& mods, TokenRange type_params,
                         TokenRange return_type, const Token& name, bool is_constructor) {
    MethodInfo m;
    m.identifier = std::string(name.text);
    m.is_constructor = is_constructor;
    m.modifiers = mods.keywords;
    m.annotations = mods.annotations;
    m.is_testcase = std::find(m.annotations.begin(), m.annotations.end(), "Test") !=
                    m.annotations.end();

    TokenRange param_text;
    if (peek().is("(")) {
      m.parameters = parse_parameters(param_text);
    } else {
      param_text = {pos_, pos_};  // compact canonical constructor
    }
    skip_dims();
    if (accept("throws")) parse_type_list();

    std::string sig;
    auto append = [&sig](const std::string& part) {
      if (part.empty()) return;
      if (!sig.empty()) sig.push_back(' ');
      sig += part;
    };
    for (const auto& k : m.modifiers) append(k);
    append(normalized(type_params));
    append(normalized(return_type));
    append(m.identifier + "(" + normalized(param_text) + ")");
    m.signature = std::move(sig);

    std::size_t last;
    if (peek().is("{")) {
      std::size_t open = pos_;
      last = skip_balanced();
      m.body = verbatim({mods.begin, last + 1});
      m.invocations = collect_invocations(open + 1, last);
    } else if (accept("default")) {
      while (!eof() && !peek().is(";")) {
        if (peek().is("{") || peek().is("(")) {
          skip_balanced();
        } else {
          ++pos_;
        }
      }
      last = pos_;
      expect(";");
    } else {
      last = pos_;
      expect(";");
    }
    m.line_span = {toks_[mods.begin].line, toks_[last].line};
    cls.methods.push_back(std::move(m));
  }

  bool looks_like_declarator() const {
    return peek().is_ident() &&
           (peek(1).is("=") || peek(1).is(",") || peek(1).is(";") || peek(1).is("["));
  }

  void parse_field_rest(ClassInfo& cls, const Modifiers& mods, TokenRange type,
                        const Token& first_name) {
    std::vector<std::string> names{std::string(first_name.text)};
    skip_dims();
    while (true) {
      if (accept("=")) {
        // initializer: stop at a top-level ',' that starts another declarator, or at ';'
        while (!eof() && !peek().is(";")) {
          if (peek().is("{") || peek().is("(") || peek().is("[")) {
            skip_balanced();
          } else if (peek().is(",")) {
            ++pos_;
            if (looks_like_declarator()) {
              --pos_;
              break;
            }
          } else if (peek().is("}") || peek().is(")") || peek().is("]")) {
            fail("unexpected closing bracket in field initializer");
          } else {
            ++pos_;
          }
        }
      }
      if (accept(",")) {
        names.emplace_back(expect_identifier().text);
        skip_dims();
        continue;
      }
      break;
    }
    std::size_t semi = pos_;
    expect(";");
    std::string decl = verbatim({mods.begin, semi + 1});
    std::string type_name = normalized(type);
    for (auto& n : names) {
      cls.fields.push_back({std::move(n), type_name, mods.keywords, decl});
    }
  }

  // ---- module-info ----

  bool is_module_declaration() const {
    std::size_t k = peek().text == "open" ? 1 : 0;
    return peek(k).is_ident() && peek(k).text == "module" && peek(k + 1).is_ident();
  }

  void skip_module_declaration() {
    while (!eof() && !peek().is("{")) ++pos_;
    if (eof()) fail("expected module body");
    skip_balanced();
  }

  // ---- invocations ----

  /// True when the `>` at index `gt` closes a type-argument list; stores the index of the
  /// matching `<` in `lt`.
  bool closes_type_arguments(std::size_t gt, std::size_t& lt) const {
    int depth = 0;
    for (std::size_t i = gt + 1; i-- > 0;) {
      const Token& t = toks_[i];
      if (t.is(">")) {
        ++depth;
      } else if (t.is("<")) {
        if (--depth == 0) {
          lt = i;
          return true;
        }
      } else if (!(t.is_ident() || t.is(".") || t.is(",") || t.is("?") || t.is("&") ||
                   t.is("[") || t.is("]") || t.is("@") || t.is("extends") || t.is("super") ||
                   (t.kind == TokenKind::Keyword && is_primitive_type(t.text)))) {
        return false;
      }
    }
    return false;
  }

  bool is_invocation_name(std::size_t i, std::size_t body_begin) const {
    if (i == body_begin) return true;
    const Token& prev = toks_[i - 1];
    if (prev.is(".")) {
      // walk back over a dotted name such as `a.b.c` to its first identifier
      std::size_t head = i;
      while (head >= body_begin + 2 && toks_[head - 1].is(".") && toks_[head - 2].is_ident()) {
        head -= 2;
      }
      if (head == i || head == body_begin) return true;
      return !(toks_[head - 1].is("new") || toks_[head - 1].is("@"));
    }
    if (prev.is_ident()) return prev.text == "yield";
    if (prev.kind == TokenKind::Keyword) {
      return !(prev.is("new") || is_primitive_type(prev.text));
    }
    if (prev.is("@") || prev.is("]")) return false;
    if (prev.is(">")) {
      std::size_t lt = 0;
      if (closes_type_arguments(i - 1, lt) && lt >= body_begin) {
        return lt > body_begin && toks_[lt - 1].is(".");
      }
      return true;
    }
    return true;
  }

  /// Names of method invocations among tokens [begin, end), in textual order.
  std::vector<std::string> collect_invocations(std::size_t begin, std::size_t end) const {
    std::vector<std::string> out;
    for (std::size_t i = begin; i < end; ++i) {
      if (toks_[i].is_ident() && toks_[i + 1].is("(") && is_invocation_name(i, begin)) {
        out.emplace_back(toks_[i].text);
      }
    }
    return out;
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::string path_;
  std::size_t pos_ = 0;
  std::vector<ClassInfo> classes_;
};

std::string to_generic_relative(const fs::path& p) {
  std::string s = p.generic_string();
  if (s.starts_with("./")) s.erase(0, 2);
  return s;
}

bool in_hidden_directory(const fs::path& relative) {
  for (const auto& part : relative.parent_path()) {
    auto s = part.string();
    if (!s.empty() && s.front() == '.' && s != "." && s != "..") return true;
  }
  return false;
}

}  // namespace

std::string sanitize_utf8(std::string_view bytes) {
  static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
  std::string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  auto cont = [&](std::size_t k) {
    return k < bytes.size() && (static_cast<unsigned char>(bytes[k]) & 0xC0) == 0x80;
  };
  while (i < bytes.size()) {
    auto c = static_cast<unsigned char>(bytes[i]);
    std::size_t len = 0;
    if (c < 0x80) {
      len = 1;
    } else if (c >= 0xC2 && c <= 0xDF) {
      len = cont(i + 1) ? 2 : 0;
    } else if (c >= 0xE0 && c <= 0xEF) {
      if (cont(i + 1) && cont(i + 2)) {
        auto c1 = static_cast<unsigned char>(bytes[i + 1]);
        bool overlong = c == 0xE0 && c1 < 0xA0;
        bool surrogate = c == 0xED && c1 >= 0xA0;
        len = (overlong || surrogate) ? 0 : 3;
      }
    } else if (c >= 0xF0 && c <= 0xF4) {
      if (cont(i + 1) && cont(i + 2) && cont(i + 3)) {
        auto c1 = static_cast<unsigned char>(bytes[i + 1]);
        bool overlong = c == 0xF0 && c1 < 0x90;
        bool too_big = c == 0xF4 && c1 >= 0x90;
        len = (overlong || too_big) ? 0 : 4;
      }
    }
    if (len == 0) {
      out.append(kReplacement);
      ++i;
    } else {
      out.append(bytes.substr(i, len));
      i += len;
    }
  }
  return out;
}

ParsedFile parse_file(std::string_view source_text, const std::string& relative_path) {
  ParsedFile out;
  out.path = relative_path;
  if (source_text.size() > kMaxSourceBytes) {
    out.parse_ok = false;
    out.error_note = "file exceeds " + std::to_string(kMaxSourceBytes) + " bytes";
    return out;
  }
  std::string text = sanitize_utf8(source_text);
  try {
    Parser parser(text, lex(text), relative_path);
    out.classes = parser.parse_compilation_unit();
  } catch (const Error& e) {
    out.classes.clear();
    out.parse_ok = false;
    out.error_note = e.what();
  }
  return out;
}

std::vector<ParsedFile> parse_repository(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) {
    throw Error("repository root is not a readable directory: " + root.string());
  }
  std::vector<std::string> relative_paths;
  fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw Error("cannot read repository root " + root.string() + ": " + ec.message());
  for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
    if (ec) throw Error("cannot enumerate " + root.string() + ": " + ec.message());
    fs::path rel = it->path().lexically_relative(root);
    auto name = it->path().filename().string();
    if (it->is_directory(ec)) {
      if (!name.empty() && name.front() == '.') it.disable_recursion_pending();
      continue;
    }
    if (it->path().extension() != ".java" || in_hidden_directory(rel)) continue;
    relative_paths.push_back(to_generic_relative(rel));
  }
  std::sort(relative_paths.begin(), relative_paths.end());

  std::vector<ParsedFile> files;
  files.reserve(relative_paths.size());
  for (const auto& rel : relative_paths) {
    fs::path full = root / fs::path(rel);
    auto size = fs::file_size(full, ec);
    if (!ec && size > kMaxSourceBytes) {
      files.push_back({rel, {}, false, "file exceeds " + std::to_string(kMaxSourceBytes) + " bytes"});
      continue;
    }
    std::ifstream in(full, std::ios::binary);
    if (!in) {
      files.push_back({rel, {}, false, "unreadable file"});
      continue;
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) {
      files.push_back({rel, {}, false, "read error"});
      continue;
    }
    files.push_back(parse_file(buf.str(), rel));
  }
  return files;
}

}  // namespace testmap::java
