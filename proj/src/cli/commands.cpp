#include "dpcollapse/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include "dpcollapse/analytics.hpp"
#include "dpcollapse/dynamics.hpp"
#include "dpcollapse/kernel.hpp"

namespace dpc::cli {

namespace {

// Domains this small are evaluated alongside the bounds without asking.
constexpr double kDeskScaleTerms = 1e9;

FastOptions fast_options(const ExecSpec& exec, std::ostream& log) {
  FastOptions opt;
  opt.workers = exec.workers;
  opt.term_budget = exec.term_budget;
  opt.allow_long = exec.allow_long;
  if (exec.progress) {
    opt.progress = [&log](double fraction) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "\r%5.1f%%", 100.0 * fraction);
      log << buf << (fraction >= 1.0 ? "\n" : "") << std::flush;
    };
  }
  return opt;
}

double largest_pair_radius_sq(const Lattice& lattice) {
  double r = 0.0;
  for (const auto& c : lattice.pair_classes()) r = std::max(r, c.mean_radius_sq);
  return r;
}

Vec3 resolve_separation(const Lattice& lattice, const SuperpositionSpec& spec, const Separation& sep) {
  return sep.resolve(lattice.longest_side()) * separation_direction(lattice, spec.direction);
}

std::optional<SquareCrystal> square_summary(const Lattice& lattice) {
  try {
    return SquareCrystal::from_lattice(lattice);
  } catch (const std::invalid_argument&) {
    return std::nullopt;
  }
}

void log_crossing(const CrossingSummary& s, std::ostream& log) {
  log << "min tau = " << format_number(s.min_tau) << " s (tau/tau_obs = " << format_number(s.min_ratio)
      << ")\n";
  if (!s.crossing) {
    log << "no tau_obs crossing: every tau exceeds tau_obs\n";
  } else if (s.r0_upper) {
    log << "tau <= tau_obs for R0 up to ~" << format_number(*s.r0_upper) << " m\n";
  } else {
    log << "tau <= tau_obs up to the end of the R0 grid\n";
  }
}

}  // namespace

CrossingSummary summarize_crossing(std::span<const SweepRow> rows, double tau_obs) {
  CrossingSummary s;
  s.min_tau = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> last_below;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i].tau) continue;
    s.min_tau = std::min(s.min_tau, *rows[i].tau);
    if (*rows[i].tau <= tau_obs) last_below = i;
  }
  s.min_ratio = s.min_tau / tau_obs;
  s.crossing = last_below.has_value();
  if (!s.crossing) return s;
  const std::size_t i = *last_below;
  if (i + 1 >= rows.size() || !rows[i + 1].tau) return s;
  // tau is a power law in R0 locally; interpolate in log-log.
  const double x0 = std::log(rows[i].r0), x1 = std::log(rows[i + 1].r0);
  const double y0 = std::log(*rows[i].tau), y1 = std::log(*rows[i + 1].tau);
  const double target = std::log(tau_obs);
  const double f = y1 == y0 ? 0.0 : (target - y0) / (y1 - y0);
  s.r0_upper = std::exp(x0 + f * (x1 - x0));
  return s;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Lattice lattice = build_lattice(cfg.lattice);
  const Vec3 d = resolve_separation(lattice, cfg.superposition, cfg.superposition.d);
  const auto grid = make_grid(cfg.sweep.r0_min, cfg.sweep.r0_max, cfg.sweep.points, cfg.sweep.log_spaced);
  const auto square = square_summary(lattice);
  const bool with_bounds = square && d.norm() > square->side;
  const double radius_sq = largest_pair_radius_sq(lattice);

  log << lattice.name() << " lattice, N = " << lattice.atom_count() << ", L = "
      << format_number(lattice.longest_side()) << " m, d = " << format_number(d.norm()) << " m, "
      << lattice.domain_size() << " terms per point\n";

  std::vector<SweepRow> rows;
  std::vector<BoundBracket> brackets;
  const FastOptions opt = fast_options(cfg.exec, log);
  for (double r0 : grid) {
    const auto result = delta_e_fast(lattice, {d, r0, cfg.superposition.sigma}, opt);
    SweepRow row;
    row.r0 = r0;
    row.r_eff = effective_radius(r0, radius_sq);
    row.n_atoms = result.n_atoms;
    row.d = d.norm();
    row.delta_e = result.delta_e;
    row.tau = result.tau;
    row.tau_obs_ratio = result.tau / kTauObs;
    if (cfg.out.timing) row.wall_ms = result.wall_ms;
    row.term_count = result.term_count;
    if (with_bounds) brackets.push_back(bound_bracket(*square, d.norm(), row.r_eff));
    rows.push_back(row);
  }
  if (with_bounds) {
    refine_monotone(brackets);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      rows[i].bound_lower = brackets[i].lower;
      rows[i].bound_upper = brackets[i].upper;
    }
  }
  write_sweep_header(out);
  for (const auto& row : rows) write_sweep_row(out, row);

  const auto summary = summarize_crossing(rows);
  log_crossing(summary, log);
  return summary.crossing ? kExitOk : kExitNoCrossing;
}

int cmd_replot(std::istream& csv, std::ostream& out, std::ostream& log) {
  std::vector<SweepRow> rows;
  try {
    rows = read_sweep_csv(csv);
  } catch (const std::runtime_error& e) {
    throw ConfigError(std::string("from-csv: ") + e.what());
  }
  write_sweep_header(out);
  for (const auto& row : rows) write_sweep_row(out, row);
  log << rows.size() << " rows\n";
  const auto summary = summarize_crossing(rows);
  if (std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.tau.has_value(); })) {
    log_crossing(summary, log);
    return summary.crossing ? kExitOk : kExitNoCrossing;
  }
  return kExitOk;
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  constexpr double kPass = 1e-10;
  const Lattice lattice = build_lattice(cfg.lattice);
  const auto r0 = make_grid(cfg.sweep.r0_min, cfg.sweep.r0_max, cfg.oracle.r0_points, cfg.sweep.log_spaced);
  std::vector<Vec3> d;
  for (const auto& sep : cfg.oracle.d) d.push_back(resolve_separation(lattice, cfg.superposition, sep));

  BruteOptions brute_opt;
  brute_opt.override_cap = cfg.oracle.override_cap;
  brute_opt.workers = cfg.exec.workers;
  const auto brute = delta_e_brute_grid(lattice, r0, d, brute_opt);

  CsvWriter csv(out, {"r0_m", "d_m", "n_atoms", "delta_e_fast_J", "delta_e_brute_J", "rel_dev"});
  double worst = 0.0;
  const FastOptions opt = fast_options(cfg.exec, log);
  for (std::size_t a = 0; a < r0.size(); ++a) {
    for (std::size_t b = 0; b < d.size(); ++b) {
      const auto fast = delta_e_fast(lattice, {d[b], r0[a], 0.0}, opt);
      const double reference = brute[a * d.size() + b].delta_e;
      const double dev = reference == 0.0 ? std::abs(fast.delta_e)
                                          : std::abs(fast.delta_e - reference) / reference;
      worst = std::max(worst, dev);
      csv.cell(r0[a]).cell(d[b].norm()).cell(fast.n_atoms).cell(fast.delta_e).cell(reference).cell(dev);
      csv.end_row();
    }
  }
  log << "max relative deviation " << format_number(worst) << (worst <= kPass ? " (pass)" : " (FAIL)")
      << ", threshold " << kPass << '\n';
  return worst <= kPass ? kExitOk : kExitCheckFailed;
}

int cmd_bench(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  auto fast_n = cfg.bench.fast_n;
  auto brute_n = cfg.bench.brute_n;
  if (fast_n.empty()) fast_n = {100, 316, 1000, 3162, 10000};
  if (brute_n.empty()) brute_n = {10, 22, 46, 100};
  const double r0 = cfg.sweep.r0_min;

  CsvWriter csv(out, {"path", "n_atoms", "wall_ms", "term_count"});
  auto run = [&](const char* path, const std::vector<std::int64_t>& sizes, bool brute) {
    std::vector<double> n_atoms, wall;
    for (std::int64_t n : sizes) {
      const Lattice lattice = build_square_lattice(n, n, cfg.lattice.spacing, cfg.lattice.mass);
      const Vec3 d = resolve_separation(lattice, cfg.superposition, cfg.superposition.d);
      double best = std::numeric_limits<double>::infinity();
      std::uint64_t terms = 0;
      for (int rep = 0; rep < cfg.bench.repeats; ++rep) {
        CollapseResult res;
        if (brute) {
          BruteOptions opt;
          opt.workers = cfg.exec.workers;
          res = delta_e_brute(lattice, {d, r0, 0.0}, opt);
        } else {
          FastOptions opt;
          opt.workers = cfg.exec.workers;
          opt.term_budget = cfg.exec.term_budget;
          opt.allow_long = cfg.exec.allow_long;
          res = delta_e_fast(lattice, {d, r0, 0.0}, opt);
        }
        best = std::min(best, res.wall_ms);
        terms = res.term_count;
      }
      csv.cell(std::string_view(path)).cell(lattice.atom_count()).cell(best).cell(terms);
      csv.end_row();
      n_atoms.push_back(static_cast<double>(lattice.atom_count()));
      wall.push_back(best);
    }
    if (n_atoms.size() >= 2) {
      const auto fit = fit_loglog(n_atoms, wall);
      log << path << " slope " << format_number(fit.slope) << " (r^2 " << format_number(fit.r_squared)
          << ")\n";
    }
  };
  run("fast", fast_n, false);
  run("brute", brute_n, true);
  return kExitOk;
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  const Lattice lattice = build_lattice(cfg.lattice);
  SquareCrystal crystal;
  try {
    crystal = SquareCrystal::from_lattice(lattice);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bounds: ") + e.what() +
                      "; the closed-form bounds exist only for the monoatomic square plate");
  }
  const Vec3 d = resolve_separation(lattice, cfg.superposition, cfg.superposition.d);
  const auto grid = make_grid(cfg.sweep.r0_min, cfg.sweep.r0_max, cfg.sweep.points, cfg.sweep.log_spaced);
  const bool numeric = static_cast<double>(lattice.domain_size()) <= kDeskScaleTerms || cfg.exec.allow_long;
  if (!numeric) log << "lattice too large for routine numerics; emitting bounds only\n";

  std::vector<BoundBracket> brackets;
  for (double r : grid) brackets.push_back(bound_bracket(crystal, d.norm(), r));
  std::vector<BoundBracket> raw = brackets;
  refine_monotone(brackets);

  const FastOptions opt = fast_options(cfg.exec, log);
  write_sweep_header(out);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SweepRow row;
    row.r0 = grid[i];
    row.r_eff = grid[i];
    row.n_atoms = lattice.atom_count();
    row.d = d.norm();
    row.bound_lower = brackets[i].lower;
    row.bound_upper = brackets[i].upper;
    std::string status;
    if (numeric) {
      const auto res = delta_e_fast(lattice, {d, grid[i], 0.0}, opt);
      row.delta_e = res.delta_e;
      row.tau = res.tau;
      row.tau_obs_ratio = res.tau / kTauObs;
      if (cfg.out.timing) row.wall_ms = res.wall_ms;
      row.term_count = res.term_count;
      status = brackets[i].contains(res.delta_e) ? " inside" : " outside";
    }
    write_sweep_row(out, row);
    log << "r_eff " << format_number(grid[i]) << " m  " << to_string(raw[i].interval)
        << (raw[i].inverted() ? "  bound inversion (upper < lower)" : "") << status << '\n';
  }
  return kExitOk;
}

int cmd_colored(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  double delta_e = cfg.colored.delta_e;
  if (delta_e < 0.0) {
    const Lattice lattice = build_lattice(cfg.lattice);
    const Vec3 d = resolve_separation(lattice, cfg.superposition, cfg.superposition.d);
    delta_e = delta_e_fast(lattice, {d, cfg.sweep.r0_min, 0.0}, fast_options(cfg.exec, log)).delta_e;
    log << "delta_e = " << format_number(delta_e) << " J at R0 = " << format_number(cfg.sweep.r0_min) << " m\n";
  }
  std::vector<ColoredNoise> models;
  for (double w : make_grid(cfg.noise.omega_min, cfg.noise.omega_max, cfg.noise.points, true)) {
    models.emplace_back(w);
  }
  if (!std::isinf(cfg.noise.omega_c)) models.emplace_back(cfg.noise.omega_c);
  models.push_back(ColoredNoise::white());

  const double t = cfg.colored.t_eval;
  CsvWriter csv(out, {"omega_c_rad_s", "delta_e_J", "tau_white_s", "collapse_time_s", "t_s", "g_s",
                      "tau_colored_s"});
  for (const auto& noise : models) {
    csv.cell(noise.omega_c()).cell(delta_e).cell(tau_white(delta_e))
        .cell(colored_collapse_time(delta_e, noise)).cell(t).cell(g_exponential(t, noise))
        .cell(tau_colored(delta_e, t, noise));
    csv.end_row();
  }
  return kExitOk;
}

int cmd_coherence(const RunConfig& cfg, std::ostream& out, std::ostream& log) {
  if (!(cfg.superposition.sigma > 0.0)) {
    throw ConfigError("superposition.sigma: the coherence command needs a wavepacket width");
  }
  const Lattice lattice = build_lattice(cfg.lattice);
  const Vec3 d = resolve_separation(lattice, cfg.superposition, cfg.superposition.d);
  double delta_e = cfg.coherence.delta_e;
  if (delta_e < 0.0) {
    delta_e = delta_e_fast(lattice, {d, cfg.sweep.r0_min, 0.0}, fast_options(cfg.exec, log)).delta_e;
  }
  CoherenceConfig cc;
  cc.total_mass = cfg.coherence.total_mass > 0.0 ? cfg.coherence.total_mass : lattice.total_mass();
  cc.sigma = cfg.superposition.sigma;
  cc.d = d.norm();
  cc.delta_e = delta_e;
  if (!(cc.d > 3.0 * cc.sigma)) {
    throw ConfigError("superposition.sigma: coherence forms need d > 3 sigma");
  }
  const double spread = spreading_time(cc.total_mass, cc.sigma);
  CsvWriter csv(out, {"t_s", "t_over_spreading", "k1", "k2", "k3", "sum", "neglect_h", "rel_diff",
                      "short_time"});
  for (double ratio : make_grid(cfg.coherence.t_min_ratio, cfg.coherence.t_max_ratio,
                                cfg.coherence.points, true)) {
    cc.t = ratio * spread;
    const auto k = coherence_elements(cc);
    const double plain = coherence_neglect_h(cc);
    const double rel = plain == 0.0 ? std::abs(k.sum) : std::abs(k.sum - plain) / std::abs(plain);
    csv.cell(cc.t).cell(ratio).cell(k.k1).cell(k.k2).cell(k.k3).cell(k.sum).cell(plain).cell(rel)
        .cell(std::string_view(k.short_time ? "1" : "0"));
    csv.end_row();
    if (!k.short_time) {
      log << "warning: t = " << format_number(cc.t) << " s is not small against M sigma^2/hbar = "
          << format_number(spread) << " s; closed forms are outside their regime\n";
    }
  }
  return kExitOk;
}

}  // namespace dpc::cli
