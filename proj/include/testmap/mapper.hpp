#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "testmap/java_parser.hpp"
#include "testmap/model.hpp"

namespace testmap {

struct MapperOptions {
  /// Disables the repository-wide unique-name fallback when locating a focal class.
  bool strict_mirror = false;
};

/// Classes (top-level or nested) that declare at least one @Test method, in input order.
std::vector<ClassInfo> find_test_classes(const std::vector<java::ParsedFile>& files);

/// Removes one leading "Test", else one trailing "Tests", else one trailing "Test".
/// Returns `name` unchanged when no affix is present or stripping would leave nothing.
std::string strip_test_affix(std::string_view name);

/// Directory of the production mirror of a test file: the first "test" path segment of the
/// file's directory becomes "main". Empty optional when the directory has no such segment.
std::optional<std::string> mirrored_directory(std::string_view test_file);

std::optional<std::pair<ClassInfo, ClassHeuristic>> find_focal_class(
    const ClassInfo& test_class, const std::vector<java::ParsedFile>& files,
    const MapperOptions& options = {});

std::optional<std::pair<MethodInfo, MethodHeuristic>> find_focal_method(
    const MethodInfo& test_case, const ClassInfo& focal_class);

struct MappingResult {
  std::vector<MappedTestCase> pairs;
  std::size_t test_classes = 0;
  std::size_t test_cases_seen = 0;
  std::size_t discarded = 0;
};

/// Runs both class heuristics and both method heuristics over one parsed repository.
/// Output order follows file order, then method order.
MappingResult map_repository(const std::vector<java::ParsedFile>& files,
                             const RepositoryMeta& meta, const MapperOptions& options = {});

}  // namespace testmap
