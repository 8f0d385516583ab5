#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testmap/audit.hpp"
#include "testmap/corpus.hpp"
#include "testmap/model.hpp"

namespace testmap::pipeline {

namespace fs = std::filesystem;

struct PipelineStats {
  std::size_t repositories_processed = 0;
  std::size_t repositories_failed = 0;
  std::size_t files_parsed = 0;
  std::size_t parse_failures = 0;
  std::size_t test_classes = 0;
  std::size_t test_cases_seen = 0;
  std::size_t pairs_mapped = 0;
  std::size_t pairs_discarded = 0;
  std::size_t duplicates_removed = 0;
  std::size_t pairs_emitted = 0;
  /// "class:PathMatch", "class:NameMatch", "method:NameMatch", "method:UniqueMethodCall".
  std::map<std::string, std::size_t> heuristics;

  nlohmann::ordered_json to_json() const;
};

struct RepoEntry {
  std::string location;  // local path (relative to the list file) or git URL
  RepositoryMeta meta;
};

/// One repository per line: `<path-or-url> [key=value ...]` with keys id, stars, forks,
/// fork, language (comma separated). Blank lines and lines starting with '#' are ignored.
/// Ids default to the 1-based entry position.
std::vector<RepoEntry> read_repo_list(const fs::path& list_file);

bool is_remote(std::string_view location);

struct MineOptions {
  fs::path repos_file;
  fs::path out;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  SplitRatios ratios;
  bool strict_mirror = false;
};

struct MineResult {
  PipelineStats stats;
  std::optional<DatasetSplit> split;
  int exit_code = 0;  // 0 pairs written, 2 zero yield
};

/// parse -> map -> dedup -> split -> write `<out>/dataset`. Per-repository failures are
/// logged and skipped; global failures throw Error.
MineResult run_mine(const MineOptions& options);

struct CorpusOptions {
  fs::path dataset_dir;
  fs::path out;
  std::vector<ContextLevel> levels{kAllLevels.begin(), kAllLevels.end()};
  std::size_t max_tokens = kDefaultMaxTokens;
  fs::path vocab;
};

/// Renders, tokenizes and writes `<out>/corpus` from an existing dataset tree.
corpus::CorpusStats run_corpus(const CorpusOptions& options);

struct AuditOptions {
  fs::path dataset_dir;
  fs::path sheet;
  double confidence = 0.95;
  double margin = 0.10;
  double proportion = 0.5;
  std::uint64_t seed = 0;
};

struct AuditOutcome {
  std::uint64_t population = 0;
  std::uint64_t sample_size = 0;
  std::vector<audit::ReviewRow> rows;
};

/// Samples the training split for manual review and writes the sheet.
AuditOutcome run_audit(const AuditOptions& options);

/// Trains a byte-level BPE vocabulary over the normalized `.java` sources of the listed
/// repositories.
bpe::Tokenizer train_vocabulary(const fs::path& repos_file, std::size_t merges);

/// Path of the vocabulary shipped with the project.
fs::path default_vocabulary();

}  // namespace testmap::pipeline
