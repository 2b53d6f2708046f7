#include "atlab/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "atlab/errors.hpp"

namespace atlab {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) {
    throw Error("failed to format a double");
  }
  return std::string(buf, ptr);
}

std::string format_sig(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void write_cells_csv(std::ostream& out, std::span<const CellSummary> cells) {
  out << kCellsCsvHeader << '\n';
  for (const CellSummary& c : cells) {
    out << c.n << ',' << c.r_effective << ',' << format_double(c.mse_pop) << ','
        << format_double(c.mse_pop_se) << ',' << format_double(c.mse_adaptive) << ','
        << format_double(c.mse_adaptive_se) << ',' << format_double(c.mismatch_rate)
        << ',' << format_double(c.mismatch_se) << ',' << c.discards << '\n';
  }
}

void write_reps_csv(std::ostream& out, std::span<const ReplicationRecord> records) {
  out << kRepsCsvHeader << '\n';
  for (const ReplicationRecord& r : records) {
    out << r.n << ',' << r.rep << ',' << format_double(r.theta_hat) << ','
        << format_double(r.theta_fn) << ',' << format_double(r.err_pop) << ','
        << format_double(r.err_adaptive) << ',' << (r.mismatch ? 1 : 0) << '\n';
  }
}

void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows) {
  out << kBoundsCsvHeader << '\n';
  for (const BoundRow& r : rows) {
    out << r.n << ',' << format_sig(r.mismatch_prob, 12) << ','
        << format_sig(r.mse_bound, 12) << ',' << format_sig(r.n_times_bound, 12) << ','
        << format_sig(r.exact_mse, 12) << '\n';
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double_field(const std::string& s, int line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SchemaError("cells.csv line " + std::to_string(line_no) +
                      ": not a number: '" + s + "'");
  }
  return v;
}

std::int64_t parse_int_field(const std::string& s, int line_no) {
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw SchemaError("cells.csv line " + std::to_string(line_no) +
                      ": not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<CellSummary> read_cells_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw SchemaError("cells.csv is empty");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCellsCsvHeader) {
    throw SchemaError("cells.csv header does not match the cells schema");
  }
  std::vector<CellSummary> cells;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 9) {
      throw SchemaError("cells.csv line " + std::to_string(line_no) +
                        ": expected 9 fields, got " + std::to_string(fields.size()));
    }
    CellSummary c;
    c.n = parse_int_field(fields[0], line_no);
    c.r_effective = parse_int_field(fields[1], line_no);
    c.mse_pop = parse_double_field(fields[2], line_no);
    c.mse_pop_se = parse_double_field(fields[3], line_no);
    c.mse_adaptive = parse_double_field(fields[4], line_no);
    c.mse_adaptive_se = parse_double_field(fields[5], line_no);
    c.mismatch_rate = parse_double_field(fields[6], line_no);
    c.mismatch_se = parse_double_field(fields[7], line_no);
    c.discards = parse_int_field(fields[8], line_no);
    cells.push_back(c);
  }
  return cells;
}

namespace {

nlohmann::json rate_report_json(const RateReport& report) {
  nlohmann::json doc;
  doc["n_points_used"] = report.n_points_used;
  if (report.fit.has_value()) {
    doc["slope"] = report.fit->slope;
    doc["intercept"] = report.fit->intercept;
    doc["residual_rms"] = report.fit->residual_rms;
  } else {
    doc["slope"] = nullptr;
    doc["intercept"] = nullptr;
    doc["residual_rms"] = nullptr;
  }
  return doc;
}

}  // namespace

std::string rates_json_text(const RateReport& pop, const RateReport& adaptive) {
  nlohmann::json doc;
  doc["mse_pop"] = rate_report_json(pop);
  doc["mse_adaptive"] = rate_report_json(adaptive);
  return doc.dump(2) + "\n";
}

}  // namespace atlab
