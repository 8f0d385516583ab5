#include "testmap/pipeline.hpp"

#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <spdlog/spdlog.h>

#include "testmap/error.hpp"
#include "testmap/java_lexer.hpp"
#include "testmap/java_parser.hpp"
#include "testmap/mapper.hpp"

extern char** environ;

namespace testmap::pipeline {

namespace {

struct RepoOutcome {
  bool ok = false;
  std::string error;
  std::size_t files = 0;
  std::size_t parse_failures = 0;
  MappingResult mapping;
};

std::int64_t parse_count(const std::string& key, const std::string& value, std::size_t line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size() || v < 0) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw FormatError("repo list line " + std::to_string(line) + ": " + key +
                      " must be a non-negative integer");
  }
}

/// Shallow clone into `dest`; returns an error message, empty on success.
std::string git_clone(const std::string& url, const fs::path& dest) {
  std::string dest_str = dest.string();
  std::vector<std::string> args = {"git", "clone", "--depth", "1", "--quiet", url, dest_str};
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);
  pid_t pid = 0;
  if (int rc = posix_spawnp(&pid, "git", nullptr, nullptr, argv.data(), environ); rc != 0) {
    return "cannot run git: " + std::string(std::strerror(rc));
  }
  int status = 0;
  if (waitpid(pid, &status, 0) < 0) return "waitpid failed";
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) return "git clone failed for " + url;
  return {};
}

RepoOutcome process_repository(const RepoEntry& entry, const fs::path& base_dir,
                               const MapperOptions& mapper_options) {
  RepoOutcome outcome;
  fs::path root;
  std::optional<fs::path> clone_dir;
  try {
    if (is_remote(entry.location)) {
      clone_dir = fs::temp_directory_path() /
                  ("testmap-" + std::to_string(::getpid()) + "-" + std::to_string(entry.meta.id));
      std::error_code ec;
      fs::remove_all(*clone_dir, ec);
      if (auto err = git_clone(entry.location, *clone_dir); !err.empty()) throw Error(err);
      root = *clone_dir;
    } else {
      root = fs::path(entry.location);
      if (root.is_relative()) root = base_dir / root;
    }
    auto files = java::parse_repository(root);
    outcome.files = files.size();
    for (const auto& f : files) {
      if (!f.parse_ok) {
        ++outcome.parse_failures;
        spdlog::debug("repo {}: {} not parsed: {}", entry.meta.id, f.path, f.error_note);
      }
    }
    outcome.mapping = map_repository(files, entry.meta, mapper_options);
    outcome.ok = true;
  } catch (const std::exception& e) {
    outcome.error = e.what();
  }
  if (clone_dir) {
    std::error_code ec;
    fs::remove_all(*clone_dir, ec);
  }
  return outcome;
}

std::vector<corpus::DatasetEntry> load_dataset(const fs::path& dataset_dir) {
  return corpus::read_dataset(dataset_dir);
}

}  // namespace

nlohmann::ordered_json PipelineStats::to_json() const {
  nlohmann::ordered_json h = nlohmann::ordered_json::object();
  for (const auto& [k, v] : heuristics) h[k] = v;
  return {{"repositories_processed", repositories_processed},
          {"repositories_failed", repositories_failed},
          {"files_parsed", files_parsed},
          {"parse_failures", parse_failures},
          {"test_classes", test_classes},
          {"test_cases_seen", test_cases_seen},
          {"pairs_mapped", pairs_mapped},
          {"pairs_discarded", pairs_discarded},
          {"duplicates_removed", duplicates_removed},
          {"pairs_emitted", pairs_emitted},
          {"heuristics", h}};
}

bool is_remote(std::string_view location) {
  return location.starts_with("http://") || location.starts_with("https://") ||
         location.starts_with("git@") || location.starts_with("ssh://") ||
         location.starts_with("git://") || location.starts_with("file://");
}

std::vector<RepoEntry> read_repo_list(const fs::path& list_file) {
  std::ifstream in(list_file);
  if (!in) throw Error("cannot read repository list " + list_file.string());

  std::vector<RepoEntry> entries;
  std::set<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string location;
    if (!(words >> location) || location.front() == '#') continue;

    RepoEntry e;
    e.location = location;
    e.meta.id = static_cast<std::int64_t>(entries.size() + 1);
    e.meta.url = location;
    e.meta.language = {"Java"};
    std::string kv;
    while (words >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw FormatError("repo list line " + std::to_string(line_no) + ": expected key=value");
      }
      std::string key = kv.substr(0, eq);
      std::string value = kv.substr(eq + 1);
      if (key == "id") {
        e.meta.id = parse_count(key, value, line_no);
      } else if (key == "stars") {
        e.meta.stargazer_count = parse_count(key, value, line_no);
      } else if (key == "forks") {
        e.meta.fork_count = parse_count(key, value, line_no);
      } else if (key == "fork") {
        e.meta.is_fork = value == "true" || value == "1";
      } else if (key == "language") {
        e.meta.language.clear();
        std::istringstream parts(value);
        std::string part;
        while (std::getline(parts, part, ',')) {
          if (!part.empty()) e.meta.language.push_back(part);
        }
      } else {
        throw FormatError("repo list line " + std::to_string(line_no) + ": unknown key '" +
                          key + "'");
      }
    }
    if (!ids.insert(e.meta.id).second) {
      throw FormatError("repo list line " + std::to_string(line_no) + ": duplicate id " +
                        std::to_string(e.meta.id));
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

MineResult run_mine(const MineOptions& options) {
  corpus::CorpusConfig config;
  config.ratios = options.ratios;
  config.seed = options.seed;
  config.output_root = options.out;
  config.check();

  const auto entries = read_repo_list(options.repos_file);
  const fs::path base_dir = fs::absolute(options.repos_file).parent_path();
  const MapperOptions mapper_options{options.strict_mirror};

  std::vector<RepoOutcome> outcomes(entries.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      spdlog::debug("mining {} ({})", entries[i].location, entries[i].meta.id);
      outcomes[i] = process_repository(entries[i], base_dir, mapper_options);
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(entries.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
  }

  MineResult result;
  PipelineStats& stats = result.stats;
  std::vector<MappedTestCase> mapped;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& o = outcomes[i];
    if (!o.ok) {
      ++stats.repositories_failed;
      spdlog::warn("skipping repository {}: {}", entries[i].location, o.error);
      continue;
    }
    ++stats.repositories_processed;
    stats.files_parsed += o.files;
    stats.parse_failures += o.parse_failures;
    stats.test_classes += o.mapping.test_classes;
    stats.test_cases_seen += o.mapping.test_cases_seen;
    stats.pairs_discarded += o.mapping.discarded;
    stats.pairs_mapped += o.mapping.pairs.size();
    for (auto& p : o.mapping.pairs) {
      ++stats.heuristics["class:" + std::string(to_string(p.class_heuristic))];
      ++stats.heuristics["method:" + std::string(to_string(p.method_heuristic))];
      mapped.push_back(std::move(p));
    }
  }

  auto unique = corpus::deduplicate(mapped);
  stats.duplicates_removed = mapped.size() - unique.size();

  std::error_code ec;
  fs::remove_all(options.out / "dataset", ec);
  if (unique.empty()) {
    result.exit_code = 2;
    return result;
  }
  result.split = corpus::split_by_repository(unique, config);
  stats.pairs_emitted = corpus::write_dataset(unique, *result.split, options.out);
  return result;
}

corpus::CorpusStats run_corpus(const CorpusOptions& options) {
  auto tokenizer = bpe::Tokenizer::load(options.vocab);
  auto entries = load_dataset(options.dataset_dir);

  corpus::CorpusConfig config;
  config.levels = options.levels;
  config.max_tokens = options.max_tokens;
  config.output_root = options.out;

  DatasetSplit split;
  std::vector<MappedTestCase> pairs;
  pairs.reserve(entries.size());
  for (auto& e : entries) {
    auto [it, inserted] = split.assignment.emplace(e.pair.repository.id, e.split);
    if (!inserted && it->second != e.split) {
      throw FormatError("repository " + std::to_string(e.pair.repository.id) +
                        " appears in more than one split");
    }
    pairs.push_back(std::move(e.pair));
  }

  std::error_code ec;
  fs::remove_all(options.out / "corpus", ec);
  return corpus::write_corpus(pairs, split, config, tokenizer);
}

AuditOutcome run_audit(const AuditOptions& options) {
  auto entries = load_dataset(options.dataset_dir);
  std::erase_if(entries, [](const auto& e) { return e.split != SplitLabel::Training; });
  if (entries.empty()) throw Error("the training split is empty; nothing to audit");

  audit::AuditConfig config;
  config.confidence = options.confidence;
  config.margin_of_error = options.margin;
  config.assumed_proportion = options.proportion;
  config.population = entries.size();
  config.seed = options.seed;

  AuditOutcome outcome;
  outcome.population = entries.size();
  outcome.sample_size = audit::sample_size(config);
  outcome.rows = audit::export_sample(entries, outcome.sample_size, options.seed);

  if (options.sheet.has_parent_path()) fs::create_directories(options.sheet.parent_path());
  std::ofstream out(options.sheet, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write review sheet " + options.sheet.string());
  audit::write_sheet(out, outcome.rows);
  if (!out) throw Error("failed writing review sheet " + options.sheet.string());
  return outcome;
}

bpe::Tokenizer train_vocabulary(const fs::path& repos_file, std::size_t merges) {
  const fs::path base_dir = fs::absolute(repos_file).parent_path();
  std::vector<std::string> texts;
  for (const auto& entry : read_repo_list(repos_file)) {
    if (is_remote(entry.location)) {
      spdlog::warn("train-vocab reads local repositories only; skipping {}", entry.location);
      continue;
    }
    fs::path root = fs::path(entry.location);
    if (root.is_relative()) root = base_dir / root;
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
      spdlog::warn("skipping unreadable repository {}", root.string());
      continue;
    }
    std::vector<fs::path> sources;
    for (const auto& f : fs::recursive_directory_iterator(root)) {
      if (f.is_regular_file() && f.path().extension() == ".java") sources.push_back(f.path());
    }
    std::sort(sources.begin(), sources.end());
    for (const auto& path : sources) {
      std::ifstream in(path, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      texts.push_back(java::normalize_code(java::sanitize_utf8(buf.str())));
    }
  }
  return bpe::train(texts, merges);
}

fs::path default_vocabulary() {
#ifdef TESTMAP_DEFAULT_VOCAB
  return fs::path(TESTMAP_DEFAULT_VOCAB);
#else
  return fs::path("data/vocab.bpe");
#endif
}

}  // namespace testmap::pipeline
