#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpcollapse/cli/units.hpp"
#include "dpcollapse/constants.hpp"
#include "dpcollapse/kernel.hpp"
#include "dpcollapse/lattice.hpp"

namespace dpc::cli {

struct LatticeSpec {
  std::string preset = "graphene";  // graphene | square | cubic | stacked-graphene | custom
  std::int64_t n1 = 100;
  std::int64_t n2 = 100;
  std::int64_t n3 = 1;
  double interlayer = kGraphiteInterlayer;  // stacked-graphene
  double spacing = kAngstrom;               // square, cubic
  double mass = 2.0e-26;                    // square, cubic; kg
  // custom
  int dimension = 2;
  std::vector<Vec3> primitive;
  std::vector<BasisAtom> basis;
};

struct SweepSpec {
  double r0_min = kAngstrom;
  double r0_max = 1e6 * kAngstrom;
  int points = 13;
  bool log_spaced = true;
};

struct SuperpositionSpec {
  Separation d;
  /// "a1": along the first primitive vector; "normal": along the in-plane
  /// normal of the side spanned by the other primitive vectors.
  std::string direction = "a1";
  double sigma = 0.0;
};

struct NoiseSpec {
  double omega_c = std::numeric_limits<double>::infinity();  // rad/s; inf = white
  double omega_min = 1e-2;
  double omega_max = 1e6;
  int points = 9;
};

struct ExecSpec {
  unsigned workers = 0;
  double term_budget = kDefaultTermBudget;
  bool allow_long = false;
  bool progress = false;
};

struct OutputSpec {
  std::string path = "-";
  /// Emit wall_ms. Off gives byte-identical output across runs.
  bool timing = true;
};

struct OracleSpec {
  std::vector<Separation> d;  // default 2L, 4L, 8L
  int r0_points = 5;
  bool override_cap = false;
};

struct BenchSpec {
  std::vector<std::int64_t> fast_n;   // cells per side of the square test lattice
  std::vector<std::int64_t> brute_n;
  int repeats = 1;
};

struct CoherenceSpec {
  double total_mass = 0.0;  // kg; 0 = lattice mass
  double delta_e = -1.0;    // J; < 0 = compute from lattice at r0_min
  double t_min_ratio = 1e-8;  // t / (M sigma^2 / hbar)
  double t_max_ratio = 1e-1;
  int points = 8;
};

struct ColoredSpec {
  double delta_e = -1.0;  // J; < 0 = compute from lattice at r0_min
  double t_eval = kTauObs;
};

struct RunConfig {
  LatticeSpec lattice;
  SweepSpec sweep;
  SuperpositionSpec superposition;
  NoiseSpec noise;
  ExecSpec exec;
  OutputSpec out;
  OracleSpec oracle;
  BenchSpec bench;
  CoherenceSpec coherence;
  ColoredSpec colored;
};

/// Builds a RunConfig from a JSON document. Unknown keys are rejected so that
/// typos do not silently fall back to defaults. Lengths must be strings with
/// a unit suffix.
RunConfig parse_run_config(const nlohmann::json& doc);

/// Reads a JSON file; throws ConfigError naming the path on failure.
nlohmann::json load_json_file(const std::string& path);

/// Sets a dotted key ("sweep.r0_min") in a JSON document, creating objects.
void set_dotted(nlohmann::json& doc, const std::string& dotted, nlohmann::json value);

Lattice build_lattice(const LatticeSpec& spec);

/// Unit vector for the separation direction.
Vec3 separation_direction(const Lattice& lattice, const std::string& direction);

/// Grid from min to max with `points` entries, log- or linearly spaced.
std::vector<double> make_grid(double min, double max, int points, bool log_spaced);

}  // namespace dpc::cli
