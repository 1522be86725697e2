#pragma once

#include <iosfwd>
#include <optional>
#include <span>

#include "dpcollapse/cli/config.hpp"
#include "dpcollapse/cli/csv.hpp"

namespace dpc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBudget = 3;
inline constexpr int kExitNoCrossing = 10;

/// Where a sweep meets the observation threshold.
struct CrossingSummary {
  bool crossing = false;        // some tau <= tau_obs
  double min_tau = 0.0;
  double min_ratio = 0.0;       // min tau / tau_obs
  /// Largest R0 with tau <= tau_obs, log-interpolated between grid points.
  /// Empty when tau <= tau_obs all the way to the end of the grid.
  std::optional<double> r0_upper;
};

CrossingSummary summarize_crossing(std::span<const SweepRow> rows, double tau_obs = kTauObs);

/// tau(R0) table. Returns kExitOk when some tau <= tau_obs, kExitNoCrossing otherwise.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Re-reads a sweep CSV, re-emits it unchanged and reports the crossing summary.
int cmd_replot(std::istream& csv, std::ostream& out, std::ostream& log);

/// Fast vs brute-force relative deviation over an (R0, d) grid.
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Wall time vs N for both paths, with fitted log-log slopes.
int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Bound brackets on an r_eff grid, with numerics when the lattice is small.
int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Colored-noise collapse times over an Omega_C grid.
int cmd_colored(const RunConfig& cfg, std::ostream& out, std::ostream& log);

/// Coherence elements with and without free evolution over a time grid.
int cmd_coherence(const RunConfig& cfg, std::ostream& out, std::ostream& log);

}  // namespace dpc::cli
