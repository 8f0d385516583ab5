#include "testmap/mapper.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace testmap {

namespace {

bool is_test_class(const ClassInfo& cls) {
  return std::any_of(cls.methods.begin(), cls.methods.end(),
                     [](const MethodInfo& m) { return m.is_testcase; });
}

std::string directory_of(std::string_view file) {
  auto slash = file.rfind('/');
  return slash == std::string_view::npos ? std::string() : std::string(file.substr(0, slash));
}

char fold(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

/// Equal up to the case of the first character.
bool same_name_folding_first(std::string_view a, std::string_view b) {
  if (a.size() != b.size() || a.empty()) return false;
  return fold(a.front()) == fold(b.front()) && a.substr(1) == b.substr(1);
}

/// Method names start lowercase ("testAdd", "addTest"); the affix rules are written for
/// the capitalized form.
std::string strip_method_affix(std::string_view name) {
  if (name.empty()) return {};
  std::string capitalized(name);
  capitalized.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(name.front())));
  return strip_test_affix(capitalized);
}

bool is_candidate_focal(const MethodInfo& m) { return !m.is_constructor && !m.is_testcase; }

}  // namespace

std::vector<ClassInfo> find_test_classes(const std::vector<java::ParsedFile>& files) {
  std::vector<ClassInfo> out;
  for (const auto& f : files) {
    for (const auto& cls : f.classes) {
      if (is_test_class(cls)) out.push_back(cls);
    }
  }
  return out;
}

std::string strip_test_affix(std::string_view name) {
  constexpr std::string_view kTest = "Test";
  constexpr std::string_view kTests = "Tests";
  if (name.starts_with(kTest) && name.size() > kTest.size()) {
    return std::string(name.substr(kTest.size()));
  }
  if (name.ends_with(kTests) && name.size() > kTests.size()) {
    return std::string(name.substr(0, name.size() - kTests.size()));
  }
  if (name.ends_with(kTest) && name.size() > kTest.size()) {
    return std::string(name.substr(0, name.size() - kTest.size()));
  }
  return std::string(name);
}

std::optional<std::string> mirrored_directory(std::string_view test_file) {
  std::string dir = directory_of(test_file);
  std::vector<std::string> segments;
  std::size_t start = 0;
  while (start <= dir.size() && !dir.empty()) {
    auto slash = dir.find('/', start);
    if (slash == std::string::npos) slash = dir.size();
    segments.push_back(dir.substr(start, slash - start));
    start = slash + 1;
  }
  auto it = std::find(segments.begin(), segments.end(), "test");
  if (it == segments.end()) return std::nullopt;
  *it = "main";
  std::string out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    if (i) out.push_back('/');
    out += segments[i];
  }
  return out;
}

std::optional<std::pair<ClassInfo, ClassHeuristic>> find_focal_class(
    const ClassInfo& test_class, const std::vector<java::ParsedFile>& files,
    const MapperOptions& options) {
  const std::string wanted = strip_test_affix(test_class.identifier);

  std::vector<const ClassInfo*> named;
  for (const auto& f : files) {
    for (const auto& cls : f.classes) {
      if (cls.identifier == wanted && !is_test_class(cls)) named.push_back(&cls);
    }
  }

  if (auto mirror = mirrored_directory(test_class.file)) {
    std::vector<const ClassInfo*> in_mirror;
    std::copy_if(named.begin(), named.end(), std::back_inserter(in_mirror),
                 [&](const ClassInfo* c) { return directory_of(c->file) == *mirror; });
    if (in_mirror.size() == 1) return std::make_pair(*in_mirror.front(), ClassHeuristic::PathMatch);
    if (in_mirror.size() > 1) return std::nullopt;
  }

  if (options.strict_mirror || named.size() != 1) return std::nullopt;
  return std::make_pair(*named.front(), ClassHeuristic::NameMatch);
}

std::optional<std::pair<MethodInfo, MethodHeuristic>> find_focal_method(
    const MethodInfo& test_case, const ClassInfo& focal_class) {
  const std::string wanted = strip_method_affix(test_case.identifier);

  const MethodInfo* by_name = nullptr;
  std::size_t name_hits = 0;
  for (const auto& m : focal_class.methods) {
    if (is_candidate_focal(m) && same_name_folding_first(m.identifier, wanted)) {
      by_name = &m;
      ++name_hits;
    }
  }
  if (name_hits == 1) return std::make_pair(*by_name, MethodHeuristic::NameMatch);

  // Unique Method Call: the test invokes exactly one of the focal class's method names,
  // and that name is not overloaded.
  std::set<std::string_view> invoked(test_case.invocations.begin(), test_case.invocations.end());
  std::set<std::string_view> common;
  for (const auto& m : focal_class.methods) {
    if (is_candidate_focal(m) && invoked.contains(m.identifier)) common.insert(m.identifier);
  }
  if (common.size() != 1) return std::nullopt;

  const MethodInfo* match = nullptr;
  for (const auto& m : focal_class.methods) {
    if (is_candidate_focal(m) && m.identifier == *common.begin()) {
      if (match) return std::nullopt;
      match = &m;
    }
  }
  return std::make_pair(*match, MethodHeuristic::UniqueMethodCall);
}

MappingResult map_repository(const std::vector<java::ParsedFile>& files,
                             const RepositoryMeta& meta, const MapperOptions& options) {
  MappingResult result;
  for (const auto& test_class : find_test_classes(files)) {
    ++result.test_classes;
    auto focal = find_focal_class(test_class, files, options);
    for (const auto& test_case : test_class.methods) {
      if (!test_case.is_testcase) continue;
      ++result.test_cases_seen;
      if (!focal) {
        ++result.discarded;
        continue;
      }
      auto method = find_focal_method(test_case, focal->first);
      if (!method) {
        ++result.discarded;
        continue;
      }
      MappedTestCase pair{meta,           test_class,    test_case, focal->first,
                          method->first,  focal->second, method->second};
      if (!validate(pair).empty()) {
        ++result.discarded;
        continue;
      }
      result.pairs.push_back(std::move(pair));
    }
  }
  return result;
}

}  // namespace testmap
