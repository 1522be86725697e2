#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dpc::cli {

/// Column layout shared with the plotting scripts. Do not reorder.
inline constexpr std::string_view kSweepHeader =
    "r0_m,r_eff_m,n_atoms,d_m,delta_e_J,tau_s,tau_obs_ratio,bound_lower_J,bound_upper_J,wall_ms,"
    "term_count";

struct SweepRow {
  double r0 = 0.0;
  double r_eff = 0.0;
  std::uint64_t n_atoms = 0;
  double d = 0.0;
  std::optional<double> delta_e;  // empty when only bounds were evaluated
  std::optional<double> tau;
  std::optional<double> tau_obs_ratio;
  std::optional<double> bound_lower;
  std::optional<double> bound_upper;
  std::optional<double> wall_ms;
  std::optional<std::uint64_t> term_count;
};

/// Shortest round-trip form: 17 significant digits ("%.17g"), inf as "inf".
std::string format_number(double value);

void write_sweep_header(std::ostream& out);
void write_sweep_row(std::ostream& out, const SweepRow& row);

/// Reads a sweep CSV. Throws std::runtime_error listing the expected header
/// when the header differs, or naming the line for malformed rows.
std::vector<SweepRow> read_sweep_csv(std::istream& in);

/// Minimal writer for the auxiliary tables (oracle, bench, colored, coherence).
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(double value);
  CsvWriter& cell(std::uint64_t value);
  CsvWriter& cell(std::string_view value);
  CsvWriter& empty();
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

}  // namespace dpc::cli
