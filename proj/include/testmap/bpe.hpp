#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace testmap::bpe {

/// A merge rule: two adjacent symbols (in byte-to-symbol alphabet) that fuse into one.
using Merge = std::pair<std::string, std::string>;

/// Maps every raw byte to a printable symbol so tokens never contain whitespace and any
/// byte sequence is representable.
std::string bytes_to_symbols(std::string_view bytes);

/// Inverse of bytes_to_symbols. Throws FormatError on text outside the symbol alphabet.
std::string symbols_to_bytes(std::string_view symbols);

/// Splits raw text into the chunks that merges never cross: letter runs, digit runs,
/// punctuation runs, each optionally led by one space, and whitespace runs.
std::vector<std::string_view> pretokenize(std::string_view text);

/// Byte-level BPE tokenizer. Immutable after construction, safe to share across threads.
class Tokenizer {
 public:
  explicit Tokenizer(std::vector<Merge> merges);

  /// Reads a merges file ("#version" header, then one "left right" pair per line).
  /// Throws FormatError when the file is missing or malformed.
  static Tokenizer load(const std::filesystem::path& merges_file);

  void save(const std::filesystem::path& merges_file) const;

  std::vector<std::string> tokenize(std::string_view text) const;
  static std::string detokenize(const std::vector<std::string>& tokens);

  const std::vector<Merge>& merges() const { return merges_; }

 private:
  void encode_chunk(std::string_view chunk, std::vector<std::string>& out) const;

  std::vector<Merge> merges_;
  std::unordered_map<std::string, std::size_t> ranks_;
};

/// Learns up to `max_merges` merges from `texts`, stopping early once the most frequent
/// pair occurs fewer than `min_frequency` times. Ties break on the lexicographically
/// smallest pair so training is deterministic.
Tokenizer train(const std::vector<std::string>& texts, std::size_t max_merges,
                std::size_t min_frequency = 2);

}  // namespace testmap::bpe
