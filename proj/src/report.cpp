#include "hullwalk/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "hullwalk/error.hpp"
#include "hullwalk/format.hpp"

namespace hullwalk {

namespace {

constexpr const char* kHeader = "schema_version,experiment_id,model,n,statistic,value,std_error,theory_value,seed";

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string real(double v) {
  if (!std::isfinite(v)) throw Error("report values must be finite");
  return format_number(v, 12);
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw Error("csv line " + std::to_string(line_no) + ": unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& s, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  return v;
}

}  // namespace

void write_csv(std::ostream& out, const ExperimentReport& report) {
  out << kHeader << '\n';
  for (const ReportRow& r : report.rows) {
    out << quote(report.schema_version) << ',' << quote(r.experiment_id) << ',' << quote(r.model_descriptor) << ','
        << r.n << ',' << quote(r.statistic) << ',' << real(r.value) << ','
        << (r.std_error ? real(*r.std_error) : "") << ',' << (r.theory_value ? real(*r.theory_value) : "") << ','
        << r.seed << '\n';
  }
}

std::string to_csv(const ExperimentReport& report) {
  std::ostringstream out;
  write_csv(out, report);
  return out.str();
}

ExperimentReport parse_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw Error("csv: missing or unexpected header row");
  ExperimentReport report;
  bool first = true;
  for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
    const auto f = split_csv_line(line, line_no);
    if (f.size() != 9) throw Error("csv line " + std::to_string(line_no) + ": expected 9 fields");
    if (first) {
      report.schema_version = f[0];
      first = false;
    } else if (f[0] != report.schema_version) {
      throw Error("csv line " + std::to_string(line_no) + ": mixed schema versions");
    }
    ReportRow r;
    r.experiment_id = f[1];
    r.model_descriptor = f[2];
    r.n = parse_u64(f[3], line_no);
    r.statistic = f[4];
    r.value = parse_double(f[5], line_no);
    if (!f[6].empty()) r.std_error = parse_double(f[6], line_no);
    if (!f[7].empty()) r.theory_value = parse_double(f[7], line_no);
    r.seed = parse_u64(f[8], line_no);
    report.rows.push_back(std::move(r));
  }
  return report;
}

ExperimentReport parse_csv_text(const std::string& text) {
  std::istringstream in(text);
  return parse_csv(in);
}

}  // namespace hullwalk
