// testmap: mines JUnit test cases mapped to focal methods and builds parallel corpora.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <spdlog/sinks/basic_file_sink.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "testmap/audit.hpp"
#include "testmap/error.hpp"
#include "testmap/pipeline.hpp"

namespace fs = std::filesystem;
using namespace testmap;

namespace {

void setup_logging(const std::optional<fs::path>& log_file) {
  std::vector<spdlog::sink_ptr> sinks;
  sinks.push_back(std::make_shared<spdlog::sinks::stderr_color_sink_mt>());
  if (log_file) {
    fs::create_directories(log_file->parent_path());
    sinks.push_back(std::make_shared<spdlog::sinks::basic_file_sink_mt>(log_file->string(), true));
  }
  auto logger = std::make_shared<spdlog::logger>("testmap", sinks.begin(), sinks.end());
  spdlog::level::level_enum level = spdlog::level::info;
  if (const char* env = std::getenv("TESTMAP_LOG")) level = spdlog::level::from_str(env);
  logger->set_level(level);
  logger->set_pattern("[%l] %v");
  spdlog::set_default_logger(logger);
}

SplitRatios parse_ratios(const std::string& text) {
  std::istringstream in(text);
  std::string part;
  std::vector<double> values;
  while (std::getline(in, part, ',')) {
    try {
      values.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error("--ratios expects three numbers such as 0.8,0.1,0.1");
    }
  }
  if (values.size() != 3) throw Error("--ratios expects three numbers such as 0.8,0.1,0.1");
  return {values[0], values[1], values[2]};
}

std::vector<ContextLevel> parse_levels(const std::vector<std::string>& names) {
  if (names.empty()) return {kAllLevels.begin(), kAllLevels.end()};
  std::vector<ContextLevel> out;
  for (const auto& n : names) {
    auto level = level_from_name(n);
    if (!level) throw Error("unknown context level '" + n + "'");
    if (std::find(out.begin(), out.end(), *level) == out.end()) out.push_back(*level);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Map JUnit test cases to focal methods and build parallel corpora"};
  app.set_config("--config", "", "TOML/INI file with default flag values (flags win)");
  app.require_subcommand(1);

  pipeline::MineOptions mine;
  std::string ratios = "0.8,0.1,0.1";
  auto* mine_cmd = app.add_subcommand("mine", "Mine mapped test cases into <out>/dataset");
  mine_cmd->add_option("--repos", mine.repos_file, "Repository list file")->required();
  mine_cmd->add_option("--out", mine.out, "Output root")->required();
  mine_cmd->add_option("--workers", mine.workers, "Parallel repository workers")->capture_default_str();
  mine_cmd->add_option("--seed", mine.seed, "Split seed")->capture_default_str();
  mine_cmd->add_option("--ratios", ratios, "train,valid,test fractions")->capture_default_str();
  mine_cmd->add_flag("--strict-mirror", mine.strict_mirror,
                     "Only accept focal classes found in the mirrored src/main directory");

  pipeline::CorpusOptions corpus;
  fs::path corpus_dataset;
  std::vector<std::string> corpus_levels;
  corpus.vocab = pipeline::default_vocabulary();
  auto* corpus_cmd = app.add_subcommand("corpus", "Render <out>/corpus from a dataset tree");
  corpus_cmd->add_option("--out", corpus.out, "Output root")->required();
  corpus_cmd->add_option("--dataset", corpus_dataset, "Dataset directory (default <out>/dataset)");
  corpus_cmd->add_option("--levels", corpus_levels, "Context levels (fm, fm+fc, ...)")->delimiter(',');
  corpus_cmd->add_option("--max-tokens", corpus.max_tokens, "Input truncation length")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  corpus_cmd->add_option("--vocab", corpus.vocab, "BPE merges file")->capture_default_str();

  pipeline::AuditOptions audit_opts;
  fs::path audit_out;
  fs::path audit_dataset;
  auto* audit_cmd = app.add_subcommand("audit", "Export a review sample of the training split");
  audit_cmd->add_option("--out", audit_out, "Output root")->required();
  audit_cmd->add_option("--dataset", audit_dataset, "Dataset directory (default <out>/dataset)");
  audit_cmd->add_option("--sheet", audit_opts.sheet, "Sheet path (default <out>/audit/review_sheet.csv)");
  audit_cmd->add_option("--confidence", audit_opts.confidence)->capture_default_str();
  audit_cmd->add_option("--margin", audit_opts.margin)->capture_default_str();
  audit_cmd->add_option("--proportion", audit_opts.proportion)->capture_default_str();
  audit_cmd->add_option("--seed", audit_opts.seed)->capture_default_str();

  fs::path report_sheet;
  auto* report_cmd = app.add_subcommand("audit-report", "Precision of a reviewed sheet");
  report_cmd->add_option("sheet", report_sheet, "Reviewed sheet")->required();

  fs::path vocab_repos;
  fs::path vocab_out;
  std::size_t vocab_merges = 2000;
  auto* vocab_cmd = app.add_subcommand("train-vocab", "Train a byte-level BPE vocabulary");
  vocab_cmd->add_option("--repos", vocab_repos, "Repository list file")->required();
  vocab_cmd->add_option("--out", vocab_out, "Merges file to write")->required();
  vocab_cmd->add_option("--merges", vocab_merges, "Maximum merges")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*mine_cmd) {
      mine.ratios = parse_ratios(ratios);
      setup_logging(mine.out / "mine.log");
      auto result = pipeline::run_mine(mine);
      auto stats = result.stats.to_json();
      std::cout << stats.dump(2) << std::endl;
      spdlog::info("stats {}", stats.dump());
      std::cerr << "repositories: " << result.stats.repositories_processed << " processed, "
                << result.stats.repositories_failed << " failed; pairs: "
                << result.stats.pairs_mapped << " mapped, " << result.stats.duplicates_removed
                << " duplicates, " << result.stats.pairs_emitted << " written\n";
      if (result.split) {
        const auto& s = *result.split;
        for (std::size_t i = 0; i < 3; ++i) {
          std::cerr << "  " << split_dir_name(kAllSplits[i]) << ": " << s.repositories[i]
                    << " repositories, " << s.pairs[i] << " pairs (" << s.achieved[i] * 100.0
                    << "%)\n";
        }
      }
      return result.exit_code;
    }
    if (*corpus_cmd) {
      setup_logging(std::nullopt);
      corpus.dataset_dir = corpus_dataset.empty() ? corpus.out / "dataset" : corpus_dataset;
      corpus.levels = parse_levels(corpus_levels);
      auto stats = pipeline::run_corpus(corpus);
      for (const auto& [file, lines] : stats.line_counts) std::cout << file << " " << lines << "\n";
      if (stats.focal_method_cut) {
        spdlog::warn("{} inputs were cut inside the focal method", stats.focal_method_cut);
      }
      std::cerr << stats.truncated_inputs << " inputs truncated to " << corpus.max_tokens
                << " tokens\n";
      return 0;
    }
    if (*audit_cmd) {
      setup_logging(std::nullopt);
      audit_opts.dataset_dir = audit_dataset.empty() ? audit_out / "dataset" : audit_dataset;
      if (audit_opts.sheet.empty()) audit_opts.sheet = audit_out / "audit" / "review_sheet.csv";
      auto outcome = pipeline::run_audit(audit_opts);
      std::cout << "population " << outcome.population << "\nsample " << outcome.sample_size
                << "\nsheet " << audit_opts.sheet.string() << "\n";
      return 0;
    }
    if (*report_cmd) {
      setup_logging(std::nullopt);
      std::ifstream in(report_sheet, std::ios::binary);
      if (!in) throw Error("cannot read " + report_sheet.string());
      auto report = audit::precision_report(audit::read_sheet(in));
      std::cout << "correct " << report.correct << "\nincorrect " << report.incorrect
                << "\nunreviewed " << report.unreviewed << "\nprecision " << report.percent()
                << "\n";
      return 0;
    }
    if (*vocab_cmd) {
      setup_logging(std::nullopt);
      auto tokenizer = pipeline::train_vocabulary(vocab_repos, vocab_merges);
      tokenizer.save(vocab_out);
      std::cerr << tokenizer.merges().size() << " merges written to " << vocab_out.string() << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
