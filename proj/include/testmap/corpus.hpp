#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testmap/bpe.hpp"
#include "testmap/focal_context.hpp"
#include "testmap/model.hpp"

namespace testmap::corpus {

namespace fs = std::filesystem;

struct CorpusConfig {
  SplitRatios ratios;
  std::uint64_t seed = 0;
  std::size_t max_tokens = kDefaultMaxTokens;
  std::vector<ContextLevel> levels{kAllLevels.begin(), kAllLevels.end()};
  fs::path output_root;

  /// Throws Error unless every ratio is positive and they sum to 1 (within 1e-9).
  void check() const;
};

// ---- JSON view of a pair ----

nlohmann::ordered_json to_json(const MappedTestCase& pair);
/// Throws FormatError when required keys are missing or mistyped.
MappedTestCase pair_from_json(const nlohmann::json& j);

// ---- dedup & split ----

/// Keeps the first pair of every (focal body, test body) whitespace-collapsed key.
std::vector<MappedTestCase> deduplicate(const std::vector<MappedTestCase>& pairs);

/// Assigns whole repositories to train/valid/test, balancing pair counts toward the
/// configured ratios. Throws Error with fewer than three repositories.
DatasetSplit split_by_repository(const std::vector<MappedTestCase>& pairs,
                                 const CorpusConfig& config);

// ---- dataset tree ----

/// Writes `dataset/<split>/<repo_id>/<pair_index>.json` under output_root.
fs::path write_pair_json(const MappedTestCase& pair, SplitLabel split, std::size_t pair_index,
                         const fs::path& output_root);

/// Writes every pair, numbering pairs per repository from 0 in input order.
std::size_t write_dataset(const std::vector<MappedTestCase>& pairs, const DatasetSplit& split,
                          const fs::path& output_root);

struct DatasetEntry {
  std::string id;  // "<split>/<repo_id>/<n>"
  SplitLabel split;
  MappedTestCase pair;
};

/// Reads a dataset tree in split, numeric repository id, numeric pair index order.
std::vector<DatasetEntry> read_dataset(const fs::path& dataset_dir);

// ---- parallel corpus ----

struct CorpusStats {
  /// Line count per file, keyed by path relative to output_root.
  std::map<std::string, std::size_t> line_counts;
  std::size_t truncated_inputs = 0;
  /// Inputs whose cut fell inside the focal method itself.
  std::size_t focal_method_cut = 0;

  nlohmann::ordered_json to_json() const;
};

CorpusStats write_corpus(const std::vector<MappedTestCase>& pairs, const DatasetSplit& split,
                         const CorpusConfig& config, const bpe::Tokenizer& tokenizer);

/// Joins tokens with single spaces, the tokenized-corpus line format.
std::string join_tokens(const std::vector<std::string>& tokens);

}  // namespace testmap::corpus
