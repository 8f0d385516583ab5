#include "testmap/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "testmap/error.hpp"
#include "testmap/java_lexer.hpp"
#include "testmap/random.hpp"

namespace testmap::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ordered_json method_json(const MethodInfo& m) {
  ordered_json params = ordered_json::array();
  for (const auto& p : m.parameters) params.push_back({{"type", p.type_name}, {"name", p.name}});
  return {{"identifier", m.identifier}, {"parameters", params},
          {"body", m.body},             {"signature", m.signature},
          {"testcase", m.is_testcase},  {"constructor", m.is_constructor},
          {"invocations", m.invocations}};
}

ordered_json method_extra_json(const MethodInfo& m) {
  return {{"modifiers", m.modifiers},
          {"annotations", m.annotations},
          {"line_span", {m.line_span.start_line, m.line_span.end_line}}};
}

ordered_json class_json(const ClassInfo& c) {
  ordered_json fields = ordered_json::array();
  for (const auto& f : c.fields) {
    fields.push_back({{"identifier", f.identifier},
                      {"type", f.type_name},
                      {"modifiers", f.modifiers},
                      {"declaration", f.declaration_text}});
  }
  ordered_json methods = ordered_json::array();
  for (const auto& m : c.methods) methods.push_back(method_json(m));
  return {{"identifier", c.identifier}, {"superclass", c.superclass},
          {"interfaces", c.interfaces}, {"fields", fields},
          {"methods", methods},         {"file", c.file}};
}

ordered_json class_extra_json(const ClassInfo& c) {
  ordered_json methods = ordered_json::array();
  for (const auto& m : c.methods) methods.push_back(method_extra_json(m));
  return methods;
}

template <typename T>
T get_as(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string("missing key '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("key '") + key + "' has the wrong type");
  }
}

MethodInfo method_from(const json& j, const json& extra) {
  MethodInfo m;
  m.identifier = get_as<std::string>(j, "identifier");
  for (const auto& p : j.at("parameters")) {
    m.parameters.push_back({get_as<std::string>(p, "type"), get_as<std::string>(p, "name")});
  }
  m.body = get_as<std::string>(j, "body");
  m.signature = get_as<std::string>(j, "signature");
  m.is_testcase = get_as<bool>(j, "testcase");
  m.is_constructor = get_as<bool>(j, "constructor");
  m.invocations = get_as<std::vector<std::string>>(j, "invocations");
  m.modifiers = get_as<std::vector<std::string>>(extra, "modifiers");
  m.annotations = get_as<std::vector<std::string>>(extra, "annotations");
  auto span = get_as<std::vector<int>>(extra, "line_span");
  if (span.size() != 2) throw FormatError("line_span must hold two integers");
  m.line_span = {span[0], span[1]};
  return m;
}

ClassInfo class_from(const json& j, const json& extra_methods) {
  ClassInfo c;
  c.identifier = get_as<std::string>(j, "identifier");
  c.superclass = get_as<std::string>(j, "superclass");
  c.interfaces = get_as<std::string>(j, "interfaces");
  for (const auto& f : j.at("fields")) {
    c.fields.push_back({get_as<std::string>(f, "identifier"), get_as<std::string>(f, "type"),
                        get_as<std::vector<std::string>>(f, "modifiers"),
                        get_as<std::string>(f, "declaration")});
  }
  const auto& methods = j.at("methods");
  if (!extra_methods.is_array() || extra_methods.size() != methods.size()) {
    throw FormatError("extra method metadata does not align with class methods");
  }
  for (std::size_t i = 0; i < methods.size(); ++i) {
    c.methods.push_back(method_from(methods[i], extra_methods[i]));
  }
  c.file = get_as<std::string>(j, "file");
  return c;
}

std::string duplicate_key(const MappedTestCase& p) {
  return java::collapse_whitespace(p.focal_method.body) + '\0' +
         java::collapse_whitespace(p.test_case.body);
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  if (ec) throw Error("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  out.close();
  if (!out) throw Error("failed writing " + path.string());
}

std::string single_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
  return s;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

/// Numeric-named entries of a directory, sorted numerically.
std::vector<std::pair<std::int64_t, fs::path>> numbered_entries(const fs::path& dir,
                                                                std::string_view suffix) {
  std::vector<std::pair<std::int64_t, fs::path>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::string name = e.path().filename().string();
    if (!suffix.empty()) {
      if (!name.ends_with(suffix)) continue;
      name.resize(name.size() - suffix.size());
    }
    if (!all_digits(name)) continue;
    out.emplace_back(std::stoll(name), e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

void CorpusConfig::check() const {
  double parts[] = {ratios.train, ratios.valid, ratios.test};
  for (double r : parts) {
    if (!(r > 0.0)) throw Error("split ratios must all be positive");
  }
  if (std::abs(parts[0] + parts[1] + parts[2] - 1.0) > 1e-9) {
    throw Error("split ratios must sum to 1");
  }
  if (max_tokens == 0) throw Error("max_tokens must be positive");
}

ordered_json to_json(const MappedTestCase& pair) {
  const auto& r = pair.repository;
  ordered_json j;
  j["repository"] = {{"id", r.id},
                     {"url", r.url},
                     {"language", r.language},
                     {"is_fork", r.is_fork},
                     {"fork_count", r.fork_count},
                     {"stargazer_count", r.stargazer_count}};
  j["focal_class"] = class_json(pair.focal_class);
  j["focal_method"] = method_json(pair.focal_method);
  j["test_class"] = class_json(pair.test_class);
  j["test_case"] = method_json(pair.test_case);
  j["extra"] = {{"class_heuristic", to_string(pair.class_heuristic)},
                {"method_heuristic", to_string(pair.method_heuristic)},
                {"focal_method", method_extra_json(pair.focal_method)},
                {"test_case", method_extra_json(pair.test_case)},
                {"focal_class_methods", class_extra_json(pair.focal_class)},
                {"test_class_methods", class_extra_json(pair.test_class)}};
  return j;
}

MappedTestCase pair_from_json(const json& j) {
  try {
    MappedTestCase p;
    const auto& r = j.at("repository");
    p.repository.id = get_as<std::int64_t>(r, "id");
    p.repository.url = get_as<std::string>(r, "url");
    p.repository.language = get_as<std::vector<std::string>>(r, "language");
    p.repository.is_fork = get_as<bool>(r, "is_fork");
    p.repository.fork_count = get_as<std::int64_t>(r, "fork_count");
    p.repository.stargazer_count = get_as<std::int64_t>(r, "stargazer_count");

    const auto& extra = j.at("extra");
    p.focal_class = class_from(j.at("focal_class"), extra.at("focal_class_methods"));
    p.test_class = class_from(j.at("test_class"), extra.at("test_class_methods"));
    p.focal_method = method_from(j.at("focal_method"), extra.at("focal_method"));
    p.test_case = method_from(j.at("test_case"), extra.at("test_case"));
    p.class_heuristic = class_heuristic_from_string(get_as<std::string>(extra, "class_heuristic"));
    p.method_heuristic =
        method_heuristic_from_string(get_as<std::string>(extra, "method_heuristic"));
    return p;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed pair JSON: ") + e.what());
  }
}

std::vector<MappedTestCase> deduplicate(const std::vector<MappedTestCase>& pairs) {
  std::unordered_set<std::string> seen;
  std::vector<MappedTestCase> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (seen.insert(duplicate_key(p)).second) out.push_back(p);
  }
  return out;
}

DatasetSplit split_by_repository(const std::vector<MappedTestCase>& pairs,
                                 const CorpusConfig& config) {
  config.check();
  std::map<std::int64_t, std::size_t> sizes;
  for (const auto& p : pairs) ++sizes[p.repository.id];
  if (sizes.size() < 3) {
    throw Error("at least 3 repositories are needed for a train/valid/test split, got " +
                std::to_string(sizes.size()));
  }

  std::vector<std::pair<std::int64_t, std::size_t>> order(sizes.begin(), sizes.end());
  std::mt19937_64 rng(config.seed);
  shuffle(order, rng);

  DatasetSplit split;
  split.ratios = config.ratios;
  split.seed = config.seed;
  std::size_t total = 0;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto [repo, size] = order[k];
    std::size_t remaining = order.size() - k;
    std::size_t empty_splits = static_cast<std::size_t>(
        std::count(std::begin(split.repositories), std::end(split.repositories), 0u));

    std::size_t choice = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < 3; ++s) {
      if (remaining <= empty_splits && split.repositories[s] != 0) continue;
      double deficit = config.ratios[kAllSplits[s]] * static_cast<double>(total + size) -
                       static_cast<double>(split.pairs[s]);
      if (deficit > best) {
        best = deficit;
        choice = s;
      }
    }
    split.assignment[repo] = kAllSplits[choice];
    split.pairs[choice] += size;
    split.repositories[choice] += 1;
    total += size;
  }
  for (std::size_t s = 0; s < 3; ++s) {
    split.achieved[s] = total ? static_cast<double>(split.pairs[s]) / static_cast<double>(total) : 0.0;
  }
  return split;
}

fs::path write_pair_json(const MappedTestCase& pair, SplitLabel split, std::size_t pair_index,
                         const fs::path& output_root) {
  fs::path path = output_root / "dataset" / std::string(split_dir_name(split)) /
                  std::to_string(pair.repository.id) / (std::to_string(pair_index) + ".json");
  write_file(path, to_json(pair).dump(2) + "\n");
  return path;
}

std::size_t write_dataset(const std::vector<MappedTestCase>& pairs, const DatasetSplit& split,
                          const fs::path& output_root) {
  std::map<std::int64_t, std::size_t> next_index;
  for (const auto& p : pairs) {
    auto it = split.assignment.find(p.repository.id);
    if (it == split.assignment.end()) {
      throw Error("repository " + std::to_string(p.repository.id) + " has no split assignment");
    }
    write_pair_json(p, it->second, next_index[p.repository.id]++, output_root);
  }
  return pairs.size();
}

std::vector<DatasetEntry> read_dataset(const fs::path& dataset_dir) {
  std::error_code ec;
  if (!fs::is_directory(dataset_dir, ec)) {
    throw Error("dataset directory not found: " + dataset_dir.string());
  }
  std::vector<DatasetEntry> out;
  for (SplitLabel split : kAllSplits) {
    fs::path split_dir = dataset_dir / std::string(split_dir_name(split));
    if (!fs::is_directory(split_dir, ec)) continue;
    for (const auto& [repo_id, repo_dir] : numbered_entries(split_dir, "")) {
      for (const auto& [index, file] : numbered_entries(repo_dir, ".json")) {
        std::ifstream in(file, std::ios::binary);
        if (!in) throw Error("cannot read " + file.string());
        json j;
        try {
          j = json::parse(in);
        } catch (const json::exception& e) {
          throw FormatError("invalid JSON in " + file.string() + ": " + e.what());
        }
        MappedTestCase pair = pair_from_json(j);
        if (pair.repository.id != repo_id) {
          throw FormatError(file.string() + " lives under the wrong repository directory");
        }
        std::string id = std::string(split_dir_name(split)) + "/" + std::to_string(repo_id) +
                         "/" + std::to_string(index);
        out.push_back({std::move(id), split, std::move(pair)});
      }
    }
  }
  return out;
}

ordered_json CorpusStats::to_json() const {
  ordered_json files = ordered_json::object();
  for (const auto& [k, v] : line_counts) files[k] = v;
  return {{"files", files},
          {"truncated_inputs", truncated_inputs},
          {"focal_method_cut", focal_method_cut}};
}

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

CorpusStats write_corpus(const std::vector<MappedTestCase>& pairs, const DatasetSplit& split,
                         const CorpusConfig& config, const bpe::Tokenizer& tokenizer) {
  config.check();
  for (const auto& p : pairs) {
    if (!split.assignment.contains(p.repository.id)) {
      throw Error("repository " + std::to_string(p.repository.id) + " has no split assignment");
    }
  }

  CorpusStats stats;
  // targets do not depend on the level
  std::vector<std::string> raw_targets;
  std::vector<std::string> tokenized_targets;
  raw_targets.reserve(pairs.size());
  tokenized_targets.reserve(pairs.size());
  for (const auto& p : pairs) {
    auto r = render(p, ContextLevel::FM);
    raw_targets.push_back(single_line(r.target_text));
    tokenized_targets.push_back(join_tokens(tokenizer.tokenize(raw_targets.back())));
  }

  for (ContextLevel level : config.levels) {
    const std::string level_dir(level_name(level));
    for (SplitLabel label : kAllSplits) {
      const std::string split_name(split_dir_name(label));
      std::ostringstream raw_in, raw_tgt, tok_in, tok_tgt;
      std::size_t inputs = 0, targets = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (split.assignment.at(pairs[i].repository.id) != label) continue;
        auto rendering = render(pairs[i], level);
        std::string raw = single_line(rendering.input_text);
        rendering.input_text = raw;
        auto cut = truncate(std::move(rendering), config.max_tokens, tokenizer);
        if (cut.truncated) ++stats.truncated_inputs;
        if (cut.focal_method_cut) ++stats.focal_method_cut;

        raw_in << raw << '\n';
        tok_in << join_tokens(cut.tokens) << '\n';
        ++inputs;
        raw_tgt << raw_targets[i] << '\n';
        tok_tgt << tokenized_targets[i] << '\n';
        ++targets;
      }
      if (inputs != targets) {
        throw Error("corpus misalignment in " + level_dir + "/" + split_name);
      }
      const std::pair<std::string, std::string> files[] = {
          {"corpus/raw/" + level_dir + "/" + split_name + ".input", raw_in.str()},
          {"corpus/raw/" + level_dir + "/" + split_name + ".target", raw_tgt.str()},
          {"corpus/tokenized/" + level_dir + "/" + split_name + ".input", tok_in.str()},
          {"corpus/tokenized/" + level_dir + "/" + split_name + ".target", tok_tgt.str()}};
      for (const auto& [rel, content] : files) {
        write_file(config.output_root / rel, content);
        stats.line_counts[rel] = inputs;
      }
    }
  }
  return stats;
}

}  // namespace testmap::corpus
