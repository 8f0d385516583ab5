#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "support.hpp"
#include "testmap/audit.hpp"
#include "testmap/error.hpp"

using namespace testmap;
using namespace testmap::audit;
namespace tt = testmap::testing;

namespace {

// Independent reference: bisection on Phi(x) = erfc(-x / sqrt 2) / 2. The upper half uses
// symmetry, since Phi itself cannot resolve p within 1e-16 of 1.
double bisect_quantile(double p) {
  if (p > 0.5) return -bisect_quantile(1.0 - p);
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::sqrt(2.0)) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AuditConfig cfg(double confidence, double e, std::uint64_t n) {
  AuditConfig c;
  c.confidence = confidence;
  c.margin_of_error = e;
  c.population = n;
  return c;
}

std::vector<corpus::DatasetEntry> entries(std::size_t n) {
  std::vector<corpus::DatasetEntry> out;
  for (std::size_t i = 0; i < n; ++i) {
    auto p = tt::synthetic_pair(static_cast<std::int64_t>(i % 7 + 1), "m" + std::to_string(i));
    out.push_back({"train/" + std::to_string(i % 7 + 1) + "/" + std::to_string(i),
                   SplitLabel::Training, p});
  }
  return out;
}

}  // namespace

TEST_CASE("normal quantile matches the bisection reference") {
  for (double p : {1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.9, 0.975, 0.995, 1 - 1e-9}) {
    CHECK(normal_quantile(p) == doctest::Approx(bisect_quantile(p)).epsilon(1e-9));
  }
  CHECK(z_value(0.95) == doctest::Approx(1.959963984540054).epsilon(1e-12));
  CHECK(z_value(0.99) == doctest::Approx(2.5758293035489004).epsilon(1e-12));
  CHECK_THROWS_AS(normal_quantile(0.0), Error);
  CHECK_THROWS_AS(normal_quantile(1.0), Error);
}

TEST_CASE("sample size") {
  CHECK(sample_size(cfg(0.95, 0.10, 624022)) == 97);
  CHECK(sample_size(cfg(0.95, 0.05, 1'000'000'000'000ull)) == 385);
  CHECK(sample_size(cfg(0.95, 0.10, 1)) == 1);
  CHECK(sample_size(cfg(0.95, 0.10, 40)) == 29);
  CHECK(sample_size(cfg(0.95, 0.10, 17)) == 15);
  auto skewed = cfg(0.95, 0.10, 624022);
  skewed.assumed_proportion = 0.0;
  CHECK(sample_size(skewed) == 1);
}

TEST_CASE("sample size is monotone") {
  const double confidences[] = {0.8, 0.9, 0.95, 0.99};
  const double margins[] = {0.01, 0.03, 0.05, 0.1, 0.2};
  const std::uint64_t populations[] = {1, 10, 100, 1000, 624022};
  for (double c : confidences)
    for (std::size_t i = 1; i < std::size(margins); ++i)
      for (auto n : populations) {
        CHECK(sample_size(cfg(c, margins[i], n)) <= sample_size(cfg(c, margins[i - 1], n)));
      }
  for (std::size_t i = 1; i < std::size(confidences); ++i)
    for (double e : margins)
      for (auto n : populations) {
        CHECK(sample_size(cfg(confidences[i], e, n)) >= sample_size(cfg(confidences[i - 1], e, n)));
      }
  for (double c : confidences)
    for (double e : margins)
      for (std::size_t i = 1; i < std::size(populations); ++i) {
        CHECK(sample_size(cfg(c, e, populations[i])) >= sample_size(cfg(c, e, populations[i - 1])));
      }
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(sample_size(cfg(1.0, 0.1, 10)), Error);
  CHECK_THROWS_AS(sample_size(cfg(0.95, 0.0, 10)), Error);
  CHECK_THROWS_AS(sample_size(cfg(0.95, 0.1, 0)), Error);
  auto c = cfg(0.95, 0.1, 10);
  c.assumed_proportion = 1.5;
  CHECK_THROWS_AS(sample_size(c), Error);
}

TEST_CASE("export_sample") {
  auto all = entries(40);
  SUBCASE("everything once") {
    auto rows = export_sample(all, all.size(), 3);
    std::set<std::string> ids;
    for (auto& r : rows) ids.insert(r.pair_id);
    CHECK(ids.size() == all.size());
  }
  SUBCASE("deterministic, seed-dependent, duplicate-free") {
    auto a = export_sample(all, 29, 1);
    auto b = export_sample(all, 29, 1);
    auto c = export_sample(all, 29, 2);
    std::ostringstream sa, sb, sc;
    write_sheet(sa, a);
    write_sheet(sb, b);
    write_sheet(sc, c);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str() != sc.str());
    std::set<std::string> ids;
    for (auto& r : a) CHECK(ids.insert(r.pair_id).second);
  }
  SUBCASE("row contents") {
    auto r = export_sample(all, 1, 0).at(0);
    CHECK(r.test_file == "src/test/java/WidgetTest.java");
    CHECK(r.focal_file == "src/main/java/Widget.java");
    CHECK(r.class_heuristic == "PathMatch");
    CHECK(r.method_heuristic == "NameMatch");
    CHECK(r.verdict.empty());
  }
  SUBCASE("too many") { CHECK_THROWS_AS(export_sample(all, 41, 0), Error); }
  SUBCASE("roughly uniform") {
    std::vector<int> hits(all.size());
    for (std::uint64_t seed = 0; seed < 2000; ++seed) {
      for (auto& r : export_sample(all, 4, seed)) {
        for (std::size_t i = 0; i < all.size(); ++i) hits[i] += all[i].id == r.pair_id;
      }
    }
    // expected 200 per entry; 5 sigma is about 67
    for (int h : hits) CHECK(std::abs(h - 200) < 70);
  }
}

TEST_CASE("sheet format") {
  std::ostringstream out;
  write_sheet(out, {});
  CHECK(out.str() ==
        "pair_id,repository_url,test_file,focal_file,focal_signature,test_signature,"
        "class_heuristic,method_heuristic,verdict\n");

  ReviewRow tricky{"train/1/0", "u", "a,b.java", "c\"d\".java", "f(int a,\nint b)", "t()", "PathMatch",
                   "NameMatch", ""};
  std::ostringstream sheet;
  write_sheet(sheet, {tricky});
  std::istringstream in(sheet.str());
  auto rows = read_sheet(in);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].test_file == "a,b.java");
  CHECK(rows[0].focal_file == "c\"d\".java");
  CHECK(rows[0].focal_signature == "f(int a,\nint b)");
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a\"b") == "\"a\"\"b\"");

  std::istringstream bad("pair_id,oops\n");
  CHECK_THROWS_AS(read_sheet(bad), FormatError);
}

TEST_CASE("precision report") {
  std::vector<ReviewRow> rows(97);
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].verdict = i < 88 ? "correct" : "incorrect";
  auto r = precision_report(rows);
  CHECK(r.correct == 88);
  CHECK(r.incorrect == 9);
  CHECK(r.percent() == "90.72%");

  rows[0].verdict = " Yes ";
  rows[1].verdict = "";
  rows[96].verdict = "0";
  r = precision_report(rows);
  CHECK(r.correct == 87);
  CHECK(r.incorrect == 9);
  CHECK(r.unreviewed == 1);

  rows[2].verdict = "maybe";
  CHECK_THROWS_AS(precision_report(rows), FormatError);
  CHECK(PrecisionReport{}.percent() == "0.00%");
}
