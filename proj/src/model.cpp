#include "testmap/model.hpp"

#include <algorithm>

#include "testmap/error.hpp"

namespace testmap {

namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80;
}

bool is_ident_part(unsigned char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

bool has_test_annotation(const MethodInfo& m) {
  return std::find(m.annotations.begin(), m.annotations.end(), "Test") != m.annotations.end();
}

bool contains_method(const ClassInfo& cls, const MethodInfo& m) {
  return std::any_of(cls.methods.begin(), cls.methods.end(), [&](const MethodInfo& candidate) {
    return candidate.identifier == m.identifier && candidate.signature == m.signature;
  });
}

void check_method(const MethodInfo& m, const ClassInfo& owner, const std::string& name,
                  std::vector<std::string>& out) {
  if (m.is_testcase != has_test_annotation(m)) {
    out.push_back(name + ".is_testcase must match the presence of a @Test annotation");
  }
  if (m.is_constructor && m.identifier != owner.identifier) {
    out.push_back(name + ".is_constructor requires identifier to equal the class identifier");
  }
  if (m.line_span.start_line > m.line_span.end_line) {
    out.push_back(name + ".line_span start_line must not exceed end_line");
  }
  if (m.has_modifier("abstract") && !m.body.empty()) {
    out.push_back(name + ".body must be empty for abstract methods");
  }
}

void check_class(const ClassInfo& cls, const std::string& name, std::vector<std::string>& out) {
  if (cls.file.empty()) {
    out.push_back(name + ".file must be non-empty");
  } else if (cls.file.front() == '/' || cls.file.find('\\') != std::string::npos ||
             (cls.file.size() > 1 && cls.file[1] == ':')) {
    out.push_back(name + ".file must be a relative forward-slash path");
  }
  for (const auto& f : cls.fields) {
    if (!is_java_identifier(f.identifier)) {
      out.push_back(name + ".fields identifier '" + f.identifier + "' is not a Java identifier");
    }
  }
}

}  // namespace

bool MethodInfo::has_modifier(std::string_view m) const {
  return std::find(modifiers.begin(), modifiers.end(), m) != modifiers.end();
}

std::string_view to_string(ClassHeuristic h) {
  return h == ClassHeuristic::PathMatch ? "PathMatch" : "NameMatch";
}

std::string_view to_string(MethodHeuristic h) {
  return h == MethodHeuristic::NameMatch ? "NameMatch" : "UniqueMethodCall";
}

ClassHeuristic class_heuristic_from_string(std::string_view s) {
  if (s == "PathMatch") return ClassHeuristic::PathMatch;
  if (s == "NameMatch") return ClassHeuristic::NameMatch;
  throw FormatError("unknown class heuristic '" + std::string(s) + "'");
}

MethodHeuristic method_heuristic_from_string(std::string_view s) {
  if (s == "NameMatch") return MethodHeuristic::NameMatch;
  if (s == "UniqueMethodCall") return MethodHeuristic::UniqueMethodCall;
  throw FormatError("unknown method heuristic '" + std::string(s) + "'");
}

std::string_view split_dir_name(SplitLabel s) {
  switch (s) {
    case SplitLabel::Training:
      return "train";
    case SplitLabel::Validation:
      return "valid";
    case SplitLabel::Test:
      return "test";
  }
  return "train";
}

SplitLabel split_from_dir_name(std::string_view s) {
  if (s == "train") return SplitLabel::Training;
  if (s == "valid") return SplitLabel::Validation;
  if (s == "test") return SplitLabel::Test;
  throw FormatError("unknown split '" + std::string(s) + "'");
}

double SplitRatios::operator[](SplitLabel s) const {
  switch (s) {
    case SplitLabel::Training:
      return train;
    case SplitLabel::Validation:
      return valid;
    case SplitLabel::Test:
      return test;
  }
  return 0.0;
}

bool is_java_identifier(std::string_view s) {
  if (s.empty() || !is_ident_start(static_cast<unsigned char>(s.front()))) return false;
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return is_ident_part(static_cast<unsigned char>(c)); });
}

std::vector<std::string> validate(const MappedTestCase& pair) {
  std::vector<std::string> out;
  if (pair.repository.fork_count < 0) out.push_back("repository.fork_count must be >= 0");
  if (pair.repository.stargazer_count < 0) {
    out.push_back("repository.stargazer_count must be >= 0");
  }
  if (!pair.test_case.is_testcase) out.push_back("test_case.is_testcase must be true");
  if (pair.focal_method.is_testcase) out.push_back("focal_method.is_testcase must be false");

  check_method(pair.test_case, pair.test_class, "test_case", out);
  check_method(pair.focal_method, pair.focal_class, "focal_method", out);
  check_class(pair.test_class, "test_class", out);
  check_class(pair.focal_class, "focal_class", out);

  if (!contains_method(pair.focal_class, pair.focal_method)) {
    out.push_back("focal_method must appear in focal_class.methods");
  }
  if (!contains_method(pair.test_class, pair.test_case)) {
    out.push_back("test_case must appear in test_class.methods");
  }
  return out;
}

}  // namespace testmap
