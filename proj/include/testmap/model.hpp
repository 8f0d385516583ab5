#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace testmap {

struct RepositoryMeta {
  std::int64_t id = 0;
  std::string url;
  std::vector<std::string> language;
  bool is_fork = false;
  std::int64_t fork_count = 0;
  std::int64_t stargazer_count = 0;

  bool operator==(const RepositoryMeta&) const = default;
};

struct FieldInfo {
  std::string identifier;
  std::string type_name;
  std::vector<std::string> modifiers;
  std::string declaration_text;

  bool operator==(const FieldInfo&) const = default;
};

struct Parameter {
  std::string type_name;
  std::string name;

  bool operator==(const Parameter&) const = default;
};

struct LineSpan {
  int start_line = 1;
  int end_line = 1;

  bool operator==(const LineSpan&) const = default;
};

struct MethodInfo {
  std::string identifier;
  std::vector<Parameter> parameters;
  std::string body;
  std::string signature;
  bool is_testcase = false;
  bool is_constructor = false;
  std::vector<std::string> invocations;
  std::vector<std::string> modifiers;
  std::vector<std::string> annotations;
  LineSpan line_span;

  bool has_modifier(std::string_view m) const;
  bool operator==(const MethodInfo&) const = default;
};

struct ClassInfo {
  std::string identifier;
  std::string superclass;
  std::string interfaces;
  std::vector<FieldInfo> fields;
  std::vector<MethodInfo> methods;
  std::string file;

  bool operator==(const ClassInfo&) const = default;
};

enum class ClassHeuristic { PathMatch, NameMatch };
enum class MethodHeuristic { NameMatch, UniqueMethodCall };

std::string_view to_string(ClassHeuristic h);
std::string_view to_string(MethodHeuristic h);
ClassHeuristic class_heuristic_from_string(std::string_view s);
MethodHeuristic method_heuristic_from_string(std::string_view s);

struct MappedTestCase {
  RepositoryMeta repository;
  ClassInfo test_class;
  MethodInfo test_case;
  ClassInfo focal_class;
  MethodInfo focal_method;
  ClassHeuristic class_heuristic = ClassHeuristic::PathMatch;
  MethodHeuristic method_heuristic = MethodHeuristic::NameMatch;

  bool operator==(const MappedTestCase&) const = default;
};

enum class SplitLabel { Training, Validation, Test };

inline constexpr SplitLabel kAllSplits[] = {SplitLabel::Training, SplitLabel::Validation,
                                            SplitLabel::Test};

/// Directory name of a split in the output tree: "train", "valid" or "test".
std::string_view split_dir_name(SplitLabel s);
SplitLabel split_from_dir_name(std::string_view s);

struct SplitRatios {
  double train = 0.8;
  double valid = 0.1;
  double test = 0.1;

  double operator[](SplitLabel s) const;
};

struct DatasetSplit {
  std::map<std::int64_t, SplitLabel> assignment;
  SplitRatios ratios;
  std::uint64_t seed = 0;
  /// Achieved pair-count fractions, indexed like kAllSplits.
  double achieved[3] = {0.0, 0.0, 0.0};
  std::size_t repositories[3] = {0, 0, 0};
  std::size_t pairs[3] = {0, 0, 0};
};

/// Returns a description of every broken invariant; empty when the pair is well formed.
std::vector<std::string> validate(const MappedTestCase& pair);

bool is_java_identifier(std::string_view s);

}  // namespace testmap
