#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace hullwalk {

inline constexpr const char* kReportSchemaVersion = "1";

struct ReportRow {
  std::string experiment_id;
  std::string model_descriptor;
  std::uint64_t n = 0;  // 0 for rows that do not belong to one step count
  std::string statistic;
  double value = 0.0;
  std::optional<double> std_error;
  std::optional<double> theory_value;  // empty when undefined
  std::uint64_t seed = 0;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ExperimentReport {
  std::string schema_version = kReportSchemaVersion;
  std::vector<ReportRow> rows;

  void add(ReportRow row) { rows.push_back(std::move(row)); }

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// Header row then one line per row; reals with 12 significant digits, LF
// line endings. Columns:
//   schema_version,experiment_id,model,n,statistic,value,std_error,theory_value,seed
void write_csv(std::ostream& out, const ExperimentReport& report);
std::string to_csv(const ExperimentReport& report);

// Inverse of write_csv. Throws hullwalk::Error on malformed input.
ExperimentReport parse_csv(std::istream& in);
ExperimentReport parse_csv_text(const std::string& text);

}  // namespace hullwalk
