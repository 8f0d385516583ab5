#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "testmap/corpus.hpp"

namespace testmap::audit {

struct AuditConfig {
  double confidence = 0.95;
  double margin_of_error = 0.10;
  double assumed_proportion = 0.5;
  std::uint64_t population = 1;
  std::uint64_t seed = 0;

  void check() const;
};

/// Inverse of the standard normal CDF, |error| < 1e-9 over (0, 1).
double normal_quantile(double p);

/// Two-sided critical value: normal_quantile(1 - (1 - confidence) / 2).
double z_value(double confidence);

/// Cochran's n0 = z^2 p (1 - p) / e^2 with the finite-population correction
/// n = n0 / (1 + (n0 - 1) / N), rounded up and clamped to [1, N].
std::uint64_t sample_size(const AuditConfig& config);

inline const std::vector<std::string> kSheetColumns = {
    "pair_id",         "repository_url", "test_file",       "focal_file", "focal_signature",
    "test_signature",  "class_heuristic", "method_heuristic", "verdict"};

struct ReviewRow {
  std::string pair_id;
  std::string repository_url;
  std::string test_file;
  std::string focal_file;
  std::string focal_signature;
  std::string test_signature;
  std::string class_heuristic;
  std::string method_heuristic;
  std::string verdict;
};

/// Uniform sample of `n` entries without replacement, reproducible for a seed.
/// Throws Error when n exceeds the number of entries.
std::vector<ReviewRow> export_sample(const std::vector<corpus::DatasetEntry>& entries,
                                     std::size_t n, std::uint64_t seed);

void write_sheet(std::ostream& out, const std::vector<ReviewRow>& rows);
/// Parses a sheet written by write_sheet (possibly edited by a reviewer).
std::vector<ReviewRow> read_sheet(std::istream& in);

struct PrecisionReport {
  std::size_t correct = 0;
  std::size_t incorrect = 0;
  std::size_t unreviewed = 0;

  double precision() const;
  /// Precision as a percentage with two decimals, e.g. "90.72%".
  std::string percent() const;
};

/// Tallies verdicts: correct/yes/y/true/1 versus incorrect/no/n/false/0; blanks are
/// unreviewed. Throws FormatError on any other verdict text.
PrecisionReport precision_report(const std::vector<ReviewRow>& rows);

std::string csv_escape(std::string_view field);

}  // namespace testmap::audit
