#include "testmap/audit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>

#include "testmap/error.hpp"
#include "testmap/random.hpp"

namespace testmap::audit {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  char c;
  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  while (in.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      quoted = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n') {
      end_field();
      records.push_back(std::move(record));
      record.clear();
    } else if (c != '\r') {
      field.push_back(c);
      field_started = true;
    }
  }
  if (quoted) throw FormatError("unterminated quoted field in review sheet");
  if (field_started || !record.empty()) {
    end_field();
    records.push_back(std::move(record));
  }
  return records;
}

}  // namespace

void AuditConfig::check() const {
  if (!(confidence > 0.0 && confidence < 1.0)) throw Error("confidence must lie in (0, 1)");
  if (!(margin_of_error > 0.0 && margin_of_error < 1.0)) {
    throw Error("margin of error must lie in (0, 1)");
  }
  if (!(assumed_proportion >= 0.0 && assumed_proportion <= 1.0)) {
    throw Error("assumed proportion must lie in [0, 1]");
  }
  if (population == 0) throw Error("population must be positive");
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile needs p in (0, 1)");
  // Acklam's rational approximation, then one Halley step against erfc.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

double z_value(double confidence) { return normal_quantile(1.0 - (1.0 - confidence) / 2.0); }

std::uint64_t sample_size(const AuditConfig& config) {
  config.check();
  const double z = z_value(config.confidence);
  const double p = config.assumed_proportion;
  const double e = config.margin_of_error;
  const double n0 = z * z * p * (1.0 - p) / (e * e);
  const double population = static_cast<double>(config.population);
  const double n = n0 * population / (population + n0 - 1.0);
  // guard against 97.0000000001-style float noise before rounding up
  auto rounded = static_cast<std::uint64_t>(std::ceil(n - 1e-9));
  return std::clamp<std::uint64_t>(rounded, 1, config.population);
}

std::vector<ReviewRow> export_sample(const std::vector<corpus::DatasetEntry>& entries,
                                     std::size_t n, std::uint64_t seed) {
  if (n > entries.size()) {
    throw Error("sample of " + std::to_string(n) + " requested from " +
                std::to_string(entries.size()) + " pairs");
  }
  std::vector<std::size_t> index(entries.size());
  std::iota(index.begin(), index.end(), 0);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, entries.size() - i));
    std::swap(index[i], index[j]);
  }

  std::vector<ReviewRow> rows;
  rows.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = entries[index[i]];
    const auto& p = e.pair;
    rows.push_back({e.id, p.repository.url, p.test_class.file, p.focal_class.file,
                    p.focal_method.signature, p.test_case.signature,
                    std::string(to_string(p.class_heuristic)),
                    std::string(to_string(p.method_heuristic)), ""});
  }
  return rows;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_sheet(std::ostream& out, const std::vector<ReviewRow>& rows) {
  for (std::size_t i = 0; i < kSheetColumns.size(); ++i) {
    out << (i ? "," : "") << kSheetColumns[i];
  }
  out << '\n';
  for (const auto& r : rows) {
    const std::string* cells[] = {&r.pair_id,         &r.repository_url,  &r.test_file,
                                  &r.focal_file,      &r.focal_signature, &r.test_signature,
                                  &r.class_heuristic, &r.method_heuristic, &r.verdict};
    for (std::size_t i = 0; i < std::size(cells); ++i) {
      out << (i ? "," : "") << csv_escape(*cells[i]);
    }
    out << '\n';
  }
}

std::vector<ReviewRow> read_sheet(std::istream& in) {
  auto records = parse_csv(in);
  if (records.empty() || records.front() != kSheetColumns) {
    throw FormatError("review sheet header does not match the expected columns");
  }
  std::vector<ReviewRow> rows;
  for (std::size_t i = 1; i < records.size(); ++i) {
    auto& rec = records[i];
    if (rec.size() == 1 && rec[0].empty()) continue;
    if (rec.size() != kSheetColumns.size()) {
      throw FormatError("review sheet row " + std::to_string(i + 1) + " has " +
                        std::to_string(rec.size()) + " cells");
    }
    rows.push_back({rec[0], rec[1], rec[2], rec[3], rec[4], rec[5], rec[6], rec[7], rec[8]});
  }
  return rows;
}

double PrecisionReport::precision() const {
  std::size_t reviewed = correct + incorrect;
  return reviewed ? static_cast<double>(correct) / static_cast<double>(reviewed) : 0.0;
}

std::string PrecisionReport::percent() const {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", precision() * 100.0);
  return buf;
}

PrecisionReport precision_report(const std::vector<ReviewRow>& rows) {
  PrecisionReport report;
  for (const auto& r : rows) {
    std::string v = lower(trim(r.verdict));
    if (v.empty()) {
      ++report.unreviewed;
    } else if (v == "correct" || v == "yes" || v == "y" || v == "true" || v == "1") {
      ++report.correct;
    } else if (v == "incorrect" || v == "no" || v == "n" || v == "false" || v == "0") {
      ++report.incorrect;
    } else {
      throw FormatError("unrecognized verdict '" + r.verdict + "' for " + r.pair_id);
    }
  }
  return report;
}

}  // namespace testmap::audit
