// dpcollapse: collapse times of crystal superpositions from the command line.
//
// Settings come from an optional JSON file (--config) and are overridden by
// flags. Tables go to --out (default stdout); diagnostics go to stderr.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dpcollapse/cli/commands.hpp"

namespace {

using nlohmann::json;
using namespace dpc::cli;

struct Overrides {
  std::optional<std::string> preset, interlayer, spacing, r0_min, r0_max, grid, d, direction, sigma,
      omega_c, out;
  std::optional<std::int64_t> n1, n2, n3;
  std::optional<int> points, omega_points, r0_points, repeats, t_points;
  std::optional<unsigned> workers;
  std::optional<double> mass, omega_min, omega_max, term_budget, total_mass, delta_e, t_min_ratio,
      t_max_ratio, t_eval;
  std::optional<std::vector<std::string>> oracle_d;
  std::optional<std::vector<std::int64_t>> fast_n, brute_n;
  bool allow_long = false, progress = false, no_timing = false, override_cap = false;

  void apply(json& doc) const {
    auto set = [&](const char* key, const auto& v) {
      if (v) set_dotted(doc, key, *v);
    };
    set("lattice.preset", preset);
    set("lattice.n1", n1);
    set("lattice.n2", n2);
    set("lattice.n3", n3);
    set("lattice.interlayer", interlayer);
    set("lattice.spacing", spacing);
    set("lattice.mass", mass);
    set("sweep.r0_min", r0_min);
    set("sweep.r0_max", r0_max);
    set("sweep.points", points);
    set("sweep.spacing", grid);
    set("superposition.d", d);
    set("superposition.direction", direction);
    set("superposition.sigma", sigma);
    if (omega_c) {
      if (*omega_c == "white") {
        set_dotted(doc, "noise.omega_c", "white");
      } else {
        try {
          set_dotted(doc, "noise.omega_c", std::stod(*omega_c));
        } catch (const std::exception&) {
          throw ConfigError("noise.omega_c: expected a number (rad/s) or white, got '" + *omega_c + "'");
        }
      }
    }
    set("noise.omega_min", omega_min);
    set("noise.omega_max", omega_max);
    set("noise.points", omega_points);
    set("exec.workers", workers);
    set("exec.term_budget", term_budget);
    if (allow_long) set_dotted(doc, "exec.allow_long", true);
    if (progress) set_dotted(doc, "exec.progress", true);
    set("out.path", out);
    if (no_timing) set_dotted(doc, "out.timing", false);
    set("oracle.d", oracle_d);
    set("oracle.r0_points", r0_points);
    if (override_cap) set_dotted(doc, "oracle.override_cap", true);
    set("bench.fast_n", fast_n);
    set("bench.brute_n", brute_n);
    set("bench.repeats", repeats);
    set("coherence.total_mass", total_mass);
    set("coherence.delta_e", delta_e);
    set("coherence.t_min_ratio", t_min_ratio);
    set("coherence.t_max_ratio", t_max_ratio);
    set("coherence.points", t_points);
    set("colored.delta_e", delta_e);
    set("colored.t", t_eval);
  }
};

void add_options(CLI::App& app, Overrides& o, std::string& config_path) {
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", o.preset, "graphene | square | cubic | stacked-graphene | custom");
  app.add_option("--n1", o.n1, "cells along a1");
  app.add_option("--n2", o.n2, "cells along a2");
  app.add_option("--n3", o.n3, "cells along a3 (3D presets)");
  app.add_option("--interlayer", o.interlayer, "stacked-graphene layer spacing, e.g. 3.35A");
  app.add_option("--spacing", o.spacing, "square/cubic lattice step, e.g. 1A");
  app.add_option("--mass", o.mass, "square/cubic atom mass in kg");
  app.add_option("--r0-min", o.r0_min, "smallest R0, e.g. 1A");
  app.add_option("--r0-max", o.r0_max, "largest R0, e.g. 1e6A");
  app.add_option("--points", o.points, "R0 grid points");
  app.add_option("--grid", o.grid, "R0 grid spacing: log | linear");
  app.add_option("--d", o.d, "separation: multiple of L (\"4L\") or a length (\"100um\")");
  app.add_option("--direction", o.direction, "separation direction: a1 | normal");
  app.add_option("--sigma", o.sigma, "wavepacket width, e.g. 1nm");
  app.add_option("--omega-c", o.omega_c, "noise cutoff in rad/s, or white");
  app.add_option("--omega-min", o.omega_min, "smallest cutoff of the colored grid (rad/s)");
  app.add_option("--omega-max", o.omega_max, "largest cutoff of the colored grid (rad/s)");
  app.add_option("--omega-points", o.omega_points, "colored grid points");
  app.add_option("--workers", o.workers, "worker threads (0: all cores)");
  app.add_option("--term-budget", o.term_budget, "refuse runs above this many kernel evaluations");
  app.add_flag("--allow-long", o.allow_long, "run even above the term budget");
  app.add_flag("--progress", o.progress, "percentage ticker on stderr");
  app.add_option("--out", o.out, "output path (- for stdout)");
  app.add_flag("--no-timing", o.no_timing, "leave wall_ms empty for reproducible output");
  app.add_option("--oracle-d", o.oracle_d, "oracle separations, e.g. 2L 4L 8L");
  app.add_option("--r0-points", o.r0_points, "oracle R0 grid points");
  app.add_flag("--override-cap", o.override_cap, "allow brute force above the atom cap");
  app.add_option("--fast-n", o.fast_n, "bench: cells per side for the fast path");
  app.add_option("--brute-n", o.brute_n, "bench: cells per side for the brute path");
  app.add_option("--repeats", o.repeats, "bench: repetitions per size (minimum is kept)");
  app.add_option("--total-mass", o.total_mass, "coherence: total mass in kg (default: lattice mass)");
  app.add_option("--delta-e", o.delta_e, "colored/coherence: use this Delta E in J instead of computing it");
  app.add_option("--t-min-ratio", o.t_min_ratio, "coherence: smallest t / (M sigma^2 / hbar)");
  app.add_option("--t-max-ratio", o.t_max_ratio, "coherence: largest t / (M sigma^2 / hbar)");
  app.add_option("--t-points", o.t_points, "coherence: time grid points");
  app.add_option("--t", o.t_eval, "colored: evaluation time for g(t) and tau(d,t), seconds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diosi-Penrose collapse times for finite crystal lattices"};
  app.require_subcommand(1);
  app.fallthrough();
  Overrides overrides;
  std::string config_path;
  std::string from_csv;
  add_options(app, overrides, config_path);

  auto* sweep = app.add_subcommand("sweep", "tau(d) over a grid of R0");
  sweep->add_option("--from-csv", from_csv, "re-read and re-emit an existing sweep CSV");
  auto* oracle = app.add_subcommand("oracle", "fast sum vs brute-force double sum");
  auto* bench = app.add_subcommand("bench", "wall time vs N for fast and brute paths");
  auto* bounds = app.add_subcommand("bounds", "analytic bound brackets for a square plate");
  auto* colored = app.add_subcommand("colored", "collapse times under colored noise");
  auto* coherence = app.add_subcommand("coherence", "coherence with and without free evolution");

  CLI11_PARSE(app, argc, argv);

  try {
    json doc = config_path.empty() ? json::object() : load_json_file(config_path);
    overrides.apply(doc);
    const RunConfig cfg = parse_run_config(doc);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (cfg.out.path != "-") {
      file.open(cfg.out.path);
      if (!file) throw ConfigError("out.path: cannot write '" + cfg.out.path + "'");
      out = &file;
    }

    if (sweep->parsed()) {
      if (!from_csv.empty()) {
        std::ifstream in(from_csv);
        if (!in) throw ConfigError("from-csv: cannot open '" + from_csv + "'");
        return cmd_replot(in, *out, std::cerr);
      }
      return cmd_sweep(cfg, *out, std::cerr);
    }
    if (oracle->parsed()) return cmd_oracle(cfg, *out, std::cerr);
    if (bench->parsed()) return cmd_bench(cfg, *out, std::cerr);
    if (bounds->parsed()) return cmd_bounds(cfg, *out, std::cerr);
    if (colored->parsed()) return cmd_colored(cfg, *out, std::cerr);
    if (coherence->parsed()) return cmd_coherence(cfg, *out, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const dpc::BudgetExceeded& e) {
    std::cerr << "budget: " << e.what() << '\n';
    return kExitBudget;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
