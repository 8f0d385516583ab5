#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "testmap/model.hpp"

namespace testmap::java {

struct ParsedFile {
  std::string path;
  std::vector<ClassInfo> classes;
  bool parse_ok = true;
  std::string error_note;

  bool operator==(const ParsedFile&) const = default;
};

/// Files larger than this are flagged as unparsable without being read.
inline constexpr std::size_t kMaxSourceBytes = 1u << 20;

/// Parses one Java compilation unit. Never throws on malformed input: syntax errors yield
/// parse_ok = false with an empty class list and the reason in error_note.
ParsedFile parse_file(std::string_view source_text, const std::string& relative_path);

/// Parses every `*.java` file under `root` (skipping hidden directories), ordered
/// lexicographically by relative path. Throws Error if `root` is not a readable directory.
std::vector<ParsedFile> parse_repository(const std::filesystem::path& root);

/// Replaces invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

}  // namespace testmap::java
