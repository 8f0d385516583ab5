#include <doctest.h>

#include <algorithm>

#include "support.hpp"
#include "testmap/model.hpp"

using namespace testmap;
using testmap::testing::synthetic_pair;

TEST_CASE("well-formed pair has no violations") {
  CHECK(validate(synthetic_pair(1, "size")).empty());
}

TEST_CASE("focal method flagged as a test case") {
  auto p = synthetic_pair(1, "size");
  p.focal_method.is_testcase = true;
  p.focal_method.annotations = {"Test"};
  p.focal_class.methods = {p.focal_method};
  CHECK(validate(p) == std::vector<std::string>{"focal_method.is_testcase must be false"});
}

TEST_CASE("focal method missing from its class") {
  auto p = synthetic_pair(1, "size");
  p.focal_class.methods.clear();
  auto v = validate(p);
  REQUIRE(v.size() == 1);
  CHECK(v[0] == "focal_method must appear in focal_class.methods");
}

TEST_CASE("test case missing from its class") {
  auto p = synthetic_pair(1, "size");
  p.test_class.methods.clear();
  CHECK(validate(p) == std::vector<std::string>{"test_case must appear in test_class.methods"});
}

TEST_CASE("each broken invariant is named") {
  auto p = synthetic_pair(1, "size");
  p.repository.fork_count = -1;
  p.repository.stargazer_count = -3;
  p.test_case.is_testcase = false;
  p.test_class.methods = {p.test_case};
  p.focal_class.file = "/abs/Widget.java";
  p.focal_class.fields = {{"1bad", "int", {}, "int 1bad;"}};
  auto v = validate(p);
  auto has = [&](const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); };
  CHECK(has("repository.fork_count must be >= 0"));
  CHECK(has("repository.stargazer_count must be >= 0"));
  CHECK(has("test_case.is_testcase must be true"));
  CHECK(has("test_case.is_testcase must match the presence of a @Test annotation"));
  CHECK(has("focal_class.file must be a relative forward-slash path"));
  CHECK(has("focal_class.fields identifier '1bad' is not a Java identifier"));
}

TEST_CASE("constructor, span and abstract-body invariants") {
  auto p = synthetic_pair(1, "size");
  p.focal_method.is_constructor = true;
  p.focal_method.line_span = {9, 2};
  p.focal_method.modifiers = {"public", "abstract"};
  p.focal_class.methods = {p.focal_method};
  auto v = validate(p);
  CHECK(v.size() == 3);
}

TEST_CASE("split and heuristic names round trip") {
  for (auto s : kAllSplits) CHECK(split_from_dir_name(split_dir_name(s)) == s);
  CHECK(split_dir_name(SplitLabel::Validation) == "valid");
  CHECK(class_heuristic_from_string(to_string(ClassHeuristic::NameMatch)) ==
        ClassHeuristic::NameMatch);
  CHECK(method_heuristic_from_string("UniqueMethodCall") == MethodHeuristic::UniqueMethodCall);
  CHECK_THROWS(split_from_dir_name("training"));
}

TEST_CASE("java identifiers") {
  CHECK(is_java_identifier("_x$1"));
  CHECK(is_java_identifier("\xc3\xa9t\xc3\xa9"));
  CHECK_FALSE(is_java_identifier(""));
  CHECK_FALSE(is_java_identifier("9lives"));
  CHECK_FALSE(is_java_identifier("a-b"));
}

TEST_CASE("split ratios index by label") {
  SplitRatios r;
  CHECK(r[SplitLabel::Training] == doctest::Approx(0.8));
  CHECK(r[SplitLabel::Test] == doctest::Approx(0.1));
}
