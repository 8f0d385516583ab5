#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testmap/model.hpp"

namespace testmap::testing {

namespace fs = std::filesystem;

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const fs::path& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

std::string read_file(const fs::path& p);
void write_file(const fs::path& p, const std::string& content);

/// Relative path -> contents for every regular file under root.
std::map<std::string, std::string> tree_contents(const fs::path& root);

/// SHA-256 hex over the sorted (relative path, contents) list of a directory tree.
std::string tree_digest(const fs::path& root);

std::vector<std::string> read_lines(const fs::path& p);

/// Validates `doc` against the draft-07 keywords used by the committed schema: type,
/// properties, required, additionalProperties (boolean), items, enum, minimum, minLength,
/// minItems, maxItems and local $ref. Returns one message per violation.
std::vector<std::string> schema_errors(const nlohmann::json& schema, const nlohmann::json& doc);

fs::path fixture_repo(const std::string& name);

/// Parses and maps one fixture repository (id 1 unless given).
std::vector<MappedTestCase> mine_fixture(const std::string& name, std::int64_t repo_id = 1);

/// Small hand-built valid pair: focal method `focal` in class Widget, test `test<Focal>`.
/// `focal_stmt` becomes the focal method's return expression so bodies can differ.
MappedTestCase synthetic_pair(std::int64_t repo_id, const std::string& focal,
                              const std::string& focal_stmt = "0");

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the testmap binary with `args` (already shell-quoted where needed), optionally
/// with `env` assignments such as "TESTMAP_LOG=debug" in front.
CommandResult run_cli(const std::string& args, const std::string& env = "");

}  // namespace testmap::testing
