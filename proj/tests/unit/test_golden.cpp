// Byte-for-byte comparison of mine + corpus output over the fixture repositories.
// Regenerate with TESTMAP_UPDATE_GOLDEN=1 after an intended output change.

#include <doctest.h>

#include <cstdlib>

#include "support.hpp"

namespace tt = testmap::testing;
namespace fs = std::filesystem;

namespace {

const fs::path kGolden = TESTMAP_GOLDEN_DIR;

bool updating() {
  const char* v = std::getenv("TESTMAP_UPDATE_GOLDEN");
  return v && std::string(v) == "1";
}

void compare_tree(const fs::path& actual, const fs::path& expected) {
  auto got = tt::tree_contents(actual);
  auto want = tt::tree_contents(expected);
  for (const auto& [path, content] : want) {
    auto it = got.find(path);
    if (it == got.end()) {
      FAIL_CHECK("missing " << path);
    } else {
      CHECK_MESSAGE(it->second == content, path);
    }
  }
  for (const auto& [path, content] : got) {
    CHECK_MESSAGE(want.contains(path), "unexpected " << path);
  }
}

}  // namespace

TEST_CASE("fixture corpus matches the committed golden output") {
  tt::TempDir d;
  const std::string repos = (fs::path(TESTMAP_FIXTURES_DIR) / "repos.txt").string();
  auto mine = tt::run_cli("mine --repos '" + repos + "' --out '" + d.path().string() + "' --seed 0");
  REQUIRE(mine.exit_code == 0);
  auto corpus = tt::run_cli("corpus --out '" + d.path().string() + "' --vocab '" TESTMAP_VOCAB "'");
  REQUIRE(corpus.exit_code == 0);

  if (updating()) {
    fs::remove_all(kGolden);
    fs::create_directories(kGolden);
    fs::copy(d / "dataset", kGolden / "dataset", fs::copy_options::recursive);
    fs::copy(d / "corpus", kGolden / "corpus", fs::copy_options::recursive);
    tt::write_file(kGolden / "mine_stats.json", mine.out);
    MESSAGE("golden files rewritten under " << kGolden);
    return;
  }

  REQUIRE(fs::exists(kGolden / "mine_stats.json"));
  CHECK(mine.out == tt::read_file(kGolden / "mine_stats.json"));
  compare_tree(d / "dataset", kGolden / "dataset");
  compare_tree(d / "corpus", kGolden / "corpus");
}
