#include "dpcollapse/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dpc::cli {

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (std::isnan(value)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_sweep_header(std::ostream& out) { out << kSweepHeader << '\n'; }

namespace {

void put(std::ostream& out, const std::optional<double>& v) {
  if (v) out << format_number(*v);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::optional<double> read_double(const std::string& s, std::size_t line, const char* column) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": column " + column +
                             " is not a number: '" + s + "'");
  }
  return v;
}

std::optional<std::uint64_t> read_count(const std::string& s, std::size_t line, const char* column) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) {
    throw std::runtime_error("line " + std::to_string(line) + ": column " + column +
                             " is not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace

void write_sweep_row(std::ostream& out, const SweepRow& row) {
  out << format_number(row.r0) << ',' << format_number(row.r_eff) << ',' << row.n_atoms << ','
      << format_number(row.d) << ',';
  put(out, row.delta_e);
  out << ',';
  put(out, row.tau);
  out << ',';
  put(out, row.tau_obs_ratio);
  out << ',';
  put(out, row.bound_lower);
  out << ',';
  put(out, row.bound_upper);
  out << ',';
  put(out, row.wall_ms);
  out << ',';
  if (row.term_count) out << *row.term_count;
  out << '\n';
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty CSV; expected header: " + std::string(kSweepHeader));
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSweepHeader) {
    throw std::runtime_error("unexpected CSV header '" + line + "'; expected: " + std::string(kSweepHeader));
  }
  std::vector<SweepRow> rows;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) {
      throw std::runtime_error("line " + std::to_string(number) + ": expected 11 fields, found " +
                               std::to_string(f.size()));
    }
    SweepRow r;
    auto required = [&](const std::string& s, const char* column) {
      const auto v = read_double(s, number, column);
      if (!v) throw std::runtime_error("line " + std::to_string(number) + ": column " + column + " is empty");
      return *v;
    };
    r.r0 = required(f[0], "r0_m");
    r.r_eff = required(f[1], "r_eff_m");
    const auto n = read_count(f[2], number, "n_atoms");
    if (!n) throw std::runtime_error("line " + std::to_string(number) + ": column n_atoms is empty");
    r.n_atoms = *n;
    r.d = required(f[3], "d_m");
    r.delta_e = read_double(f[4], number, "delta_e_J");
    r.tau = read_double(f[5], number, "tau_s");
    r.tau_obs_ratio = read_double(f[6], number, "tau_obs_ratio");
    r.bound_lower = read_double(f[7], number, "bound_lower_J");
    r.bound_upper = read_double(f[8], number, "bound_upper_J");
    r.wall_ms = read_double(f[9], number, "wall_ms");
    r.term_count = read_count(f[10], number, "term_count");
    rows.push_back(r);
  }
  return rows;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::separator() {
  if (current_ >= columns_) throw std::logic_error("CSV row has more cells than columns");
  if (current_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::cell(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::cell(std::uint64_t value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::empty() {
  separator();
  return *this;
}

void CsvWriter::end_row() {
  while (current_ < columns_) separator();
  out_ << '\n';
  current_ = 0;
}

}  // namespace dpc::cli
