#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "testmap/bpe.hpp"
#include "testmap/model.hpp"

namespace testmap {

/// Nested focal-context levels, each adding one section to the previous one.
enum class ContextLevel { FM, FM_FC, FM_FC_C, FM_FC_C_M, FM_FC_C_M_F };

inline constexpr std::array<ContextLevel, 5> kAllLevels = {
    ContextLevel::FM, ContextLevel::FM_FC, ContextLevel::FM_FC_C, ContextLevel::FM_FC_C_M,
    ContextLevel::FM_FC_C_M_F};

/// Directory name used in the corpus tree: "fm", "fm+fc", ..., "fm+fc+c+m+f".
std::string_view level_name(ContextLevel level);
std::optional<ContextLevel> level_from_name(std::string_view name);

enum class SectionKind { FocalMethod, ClassName, Constructor, MethodSignature, Field };

struct Section {
  SectionKind kind;
  std::string text;

  bool operator==(const Section&) const = default;
  auto operator<=>(const Section&) const = default;
};

struct FocalContextRendering {
  ContextLevel level = ContextLevel::FM;
  std::string input_text;
  std::string target_text;
  bool truncated = false;
  std::size_t token_count = 0;
  /// Sections in priority order, as they appear in input_text.
  std::vector<Section> sections;
  /// Tokens of input_text; filled by truncate().
  std::vector<std::string> tokens;
  /// Set by truncate() when the cut falls inside the focal method itself.
  bool focal_method_cut = false;
  /// Byte offset in input_text where the focal-method source ends.
  std::size_t focal_method_end = 0;
};

inline constexpr std::size_t kDefaultMaxTokens = 1024;

/// Builds the input text of `level` for a valid pair. Throws Error listing the violations
/// when the pair fails validate().
FocalContextRendering render(const MappedTestCase& pair, ContextLevel level);

/// Keeps at most `max_tokens` leading tokens of the input; the target is never cut.
FocalContextRendering truncate(FocalContextRendering rendering, std::size_t max_tokens,
                               const bpe::Tokenizer& tokenizer);

}  // namespace testmap
