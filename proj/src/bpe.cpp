#include "testmap/bpe.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <set>

#include "testmap/error.hpp"

namespace testmap::bpe {

namespace {

constexpr std::string_view kHeader = "#version: testmap-bpe 1";

struct ByteAlphabet {
  std::array<char32_t, 256> to_symbol{};
  std::map<char32_t, unsigned char> to_byte;
  std::array<std::string, 256> encoded;

  ByteAlphabet() {
    std::array<bool, 256> printable{};
    for (int b = '!'; b <= '~'; ++b) printable[b] = true;
    for (int b = 0xA1; b <= 0xAC; ++b) printable[b] = true;
    for (int b = 0xAE; b <= 0xFF; ++b) printable[b] = true;
    char32_t next = 256;
    for (int b = 0; b < 256; ++b) {
      to_symbol[b] = printable[b] ? static_cast<char32_t>(b) : next++;
      to_byte[to_symbol[b]] = static_cast<unsigned char>(b);
      char32_t cp = to_symbol[b];
      std::string utf8;
      if (cp < 0x80) {
        utf8.push_back(static_cast<char>(cp));
      } else {
        utf8.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        utf8.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
      }
      encoded[b] = std::move(utf8);
    }
  }
};

const ByteAlphabet& alphabet() {
  static const ByteAlphabet a;
  return a;
}

enum class CharClass { Letter, Digit, Space, Other };

CharClass classify(unsigned char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c == '$' || c >= 0x80) {
    return CharClass::Letter;
  }
  if (c >= '0' && c <= '9') return CharClass::Digit;
  if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
    return CharClass::Space;
  }
  return CharClass::Other;
}

/// Splits a symbol string into its individual symbols (one or two UTF-8 bytes each).
std::vector<std::string> split_symbols(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : ((c & 0xE0) == 0xC0 ? 2 : 0);
    if (len == 0 || i + len > s.size()) throw FormatError("invalid byte-level symbol text");
    out.emplace_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::string rank_key(std::string_view a, std::string_view b) {
  std::string key;
  key.reserve(a.size() + b.size() + 1);
  key.append(a);
  key.push_back(' ');
  key.append(b);
  return key;
}

}  // namespace

std::string bytes_to_symbols(std::string_view bytes) {
  const auto& a = alphabet();
  std::string out;
  out.reserve(bytes.size() * 2);
  for (char c : bytes) out += a.encoded[static_cast<unsigned char>(c)];
  return out;
}

std::string symbols_to_bytes(std::string_view symbols) {
  const auto& a = alphabet();
  std::string out;
  out.reserve(symbols.size());
  std::size_t i = 0;
  while (i < symbols.size()) {
    auto c = static_cast<unsigned char>(symbols[i]);
    char32_t cp;
    if (c < 0x80) {
      cp = c;
      i += 1;
    } else if ((c & 0xE0) == 0xC0 && i + 1 < symbols.size()) {
      cp = (static_cast<char32_t>(c & 0x1F) << 6) |
           (static_cast<unsigned char>(symbols[i + 1]) & 0x3F);
      i += 2;
    } else {
      throw FormatError("invalid byte-level symbol text");
    }
    auto it = a.to_byte.find(cp);
    if (it == a.to_byte.end()) throw FormatError("symbol outside the byte alphabet");
    out.push_back(static_cast<char>(it->second));
  }
  return out;
}

std::vector<std::string_view> pretokenize(std::string_view text) {
  std::vector<std::string_view> out;
  const std::size_t n = text.size();
  auto run_end = [&](std::size_t from, CharClass cls) {
    while (from < n && classify(static_cast<unsigned char>(text[from])) == cls) ++from;
    return from;
  };
  std::size_t i = 0;
  while (i < n) {
    CharClass cls = classify(static_cast<unsigned char>(text[i]));
    if (cls != CharClass::Space) {
      std::size_t j = run_end(i, cls);
      out.push_back(text.substr(i, j - i));
      i = j;
      continue;
    }
    std::size_t j = run_end(i, CharClass::Space);
    if (j < n && text[j - 1] == ' ') {
      if (j - i >= 2) {
        // leave the final space to lead the next word
        out.push_back(text.substr(i, j - 1 - i));
        i = j - 1;
        continue;
      }
      std::size_t k = run_end(j, classify(static_cast<unsigned char>(text[j])));
      out.push_back(text.substr(i, k - i));
      i = k;
      continue;
    }
    out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

Tokenizer::Tokenizer(std::vector<Merge> merges) : merges_(std::move(merges)) {
  ranks_.reserve(merges_.size());
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    ranks_.emplace(rank_key(merges_[r].first, merges_[r].second), r);
  }
}

Tokenizer Tokenizer::load(const std::filesystem::path& merges_file) {
  std::ifstream in(merges_file, std::ios::binary);
  if (!in) throw FormatError("cannot open vocabulary file " + merges_file.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw FormatError("vocabulary file " + merges_file.string() + " lacks the '" +
                      std::string(kHeader) + "' header");
  }
  std::set<std::string> known;
  for (const auto& s : alphabet().encoded) known.insert(s);

  std::vector<Merge> merges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size() ||
        line.find(' ', space + 1) != std::string::npos) {
      throw FormatError("vocabulary line " + std::to_string(line_no) + " is not 'left right'");
    }
    std::string left = line.substr(0, space);
    std::string right = line.substr(space + 1);
    if (!known.contains(left) || !known.contains(right)) {
      throw FormatError("vocabulary line " + std::to_string(line_no) +
                        " merges a symbol that no earlier rule produces");
    }
    known.insert(left + right);
    merges.emplace_back(std::move(left), std::move(right));
  }
  return Tokenizer(std::move(merges));
}

void Tokenizer::save(const std::filesystem::path& merges_file) const {
  std::ofstream out(merges_file, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write vocabulary file " + merges_file.string());
  out << kHeader << '\n';
  for (const auto& [l, r] : merges_) out << l << ' ' << r << '\n';
  if (!out) throw Error("failed writing vocabulary file " + merges_file.string());
}

void Tokenizer::encode_chunk(std::string_view chunk, std::vector<std::string>& out) const {
  const auto& a = alphabet();
  std::vector<std::string> symbols;
  symbols.reserve(chunk.size());
  for (char c : chunk) symbols.push_back(a.encoded[static_cast<unsigned char>(c)]);

  while (symbols.size() > 1) {
    std::size_t best_rank = ranks_.size();
    for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
      auto it = ranks_.find(rank_key(symbols[i], symbols[i + 1]));
      if (it != ranks_.end() && it->second < best_rank) best_rank = it->second;
    }
    if (best_rank == ranks_.size()) break;
    const auto& [left, right] = merges_[best_rank];
    std::vector<std::string> merged;
    merged.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
      if (i + 1 < symbols.size() && symbols[i] == left && symbols[i + 1] == right) {
        merged.push_back(left + right);
        ++i;
      } else {
        merged.push_back(std::move(symbols[i]));
      }
    }
    symbols = std::move(merged);
  }
  for (auto& s : symbols) out.push_back(std::move(s));
}

std::vector<std::string> Tokenizer::tokenize(std::string_view text) const {
  std::vector<std::string> out;
  for (auto chunk : pretokenize(text)) encode_chunk(chunk, out);
  return out;
}

std::string Tokenizer::detokenize(const std::vector<std::string>& tokens) {
  std::string out;
  for (const auto& t : tokens) out += symbols_to_bytes(t);
  return out;
}

Tokenizer train(const std::vector<std::string>& texts, std::size_t max_merges,
                std::size_t min_frequency) {
  std::map<std::string, std::size_t> chunk_counts;
  for (const auto& text : texts) {
    for (auto chunk : pretokenize(text)) ++chunk_counts[std::string(chunk)];
  }

  std::vector<std::string> symbol_text;
  std::map<std::string, int> symbol_id;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = symbol_id.emplace(s, static_cast<int>(symbol_text.size()));
    if (inserted) symbol_text.push_back(s);
    return it->second;
  };

  struct Word {
    std::vector<int> symbols;
    std::size_t count;
  };
  std::vector<Word> words;
  words.reserve(chunk_counts.size());
  for (const auto& [chunk, count] : chunk_counts) {
    Word w{{}, count};
    for (const auto& sym : split_symbols(bytes_to_symbols(chunk))) w.symbols.push_back(intern(sym));
    words.push_back(std::move(w));
  }

  std::vector<Merge> merges;
  while (merges.size() < max_merges) {
    std::map<std::pair<int, int>, std::size_t> pair_counts;
    for (const auto& w : words) {
      for (std::size_t i = 0; i + 1 < w.symbols.size(); ++i) {
        pair_counts[{w.symbols[i], w.symbols[i + 1]}] += w.count;
      }
    }
    const std::pair<int, int>* best = nullptr;
    std::size_t best_count = 0;
    for (const auto& [p, c] : pair_counts) {
      if (!best || c > best_count ||
          (c == best_count &&
           std::tie(symbol_text[p.first], symbol_text[p.second]) <
               std::tie(symbol_text[best->first], symbol_text[best->second]))) {
        best = &p;
        best_count = c;
      }
    }
    if (!best || best_count < min_frequency) break;

    const int left = best->first;
    const int right = best->second;
    const int fused = intern(symbol_text[left] + symbol_text[right]);
    merges.emplace_back(symbol_text[left], symbol_text[right]);
    for (auto& w : words) {
      std::vector<int> next;
      next.reserve(w.symbols.size());
      for (std::size_t i = 0; i < w.symbols.size(); ++i) {
        if (i + 1 < w.symbols.size() && w.symbols[i] == left && w.symbols[i + 1] == right) {
          next.push_back(fused);
          ++i;
        } else {
          next.push_back(w.symbols[i]);
        }
      }
      w.symbols = std::move(next);
    }
  }
  return Tokenizer(std::move(merges));
}

}  // namespace testmap::bpe
