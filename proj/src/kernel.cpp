#include "dpcollapse/kernel.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include <Eigen/Geometry>

#include "dpcollapse/summation.hpp"

namespace dpc {

void SuperpositionConfig::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw std::invalid_argument("R0 must be positive and finite");
  if (!d.allFinite()) throw std::invalid_argument("separation d must be finite");
  if (sigma < 0.0 || !std::isfinite(sigma)) throw std::invalid_argument("sigma must be >= 0");
}

double collapse_time(double delta_e) {
  if (delta_e < 0.0) throw std::invalid_argument("delta_e must be non-negative");
  if (delta_e == 0.0) return std::numeric_limits<double>::infinity();
  return kHbar / delta_e;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

unsigned resolve_workers(unsigned requested) {
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

// Runs body(chunk) for every chunk index on `workers` threads. Chunks are
// handed out dynamically; callers store per-chunk results and combine them
// in index order, so the outcome does not depend on the schedule.
template <typename Body>
void run_chunks(std::size_t chunks, unsigned workers, Body&& body) {
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) body(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto loop = [&] {
    try {
      for (std::size_t c = next++; c < chunks; c = next++) body(c);
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = chunks;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// erf(x/2R)/x with the series branch, written so the compiler can blend both
// sides in a SIMD loop.
struct Smearing {
  explicit Smearing(double r_eff)
      : half_inv(0.5 / r_eff),
        cutoff(1e-6 * r_eff),
        series0(kInvSqrtPi / r_eff),
        series2(kInvSqrtPi / (12.0 * r_eff * r_eff * r_eff)),
        saturation_distance(2.0 * kErfSaturation * r_eff * (1.0 + 1e-12)) {}

  [[gnu::always_inline]] double operator()(double x) const {
    const double exact = erf_over_x(x * half_inv) * half_inv;
    const double series = series0 - series2 * x * x;
    return x < cutoff ? series : exact;
  }

  double half_inv;
  double cutoff;
  double series0;
  double series2;
  double saturation_distance;
};

// Sum over one domain row of (N_D - |n_D|) * f(r). The multiplicity of the
// outer offsets and the mass product are applied by the caller.
double row_sum(const DomainRow& row, const Vec3& d, const Smearing& g, std::vector<double>& buf) {
  const std::int64_t count = row.count;
  buf.resize(static_cast<std::size_t>(count));
  double* out = buf.data();
  const std::int64_t half = row.last_extent - 1;
  // Offsets are measured from the n_D = 0 entry so that r is exact there.
  const Vec3 base = row.origin + static_cast<double>(half) * row.step;
  const double bx = base.x(), by = base.y(), bz = base.z();
  const double sx = row.step.x(), sy = row.step.y(), sz = row.step.z();
  const double dx = d.x(), dy = d.y(), dz = d.z();
  const double extent = static_cast<double>(row.last_extent);
  // Whole row beyond the saturation radius from both 0 and d: erf is exactly 1.
  const Vec3 unit = row.step.normalized();
  const double clear = g.saturation_distance;
  if (base.cross(unit).norm() > clear && (d - base).cross(unit).norm() > clear) {
    for (std::int64_t k = 0; k < count; ++k) {
      const double n = static_cast<double>(k - half);
      const double rx = bx + n * sx;
      const double ry = by + n * sy;
      const double rz = bz + n * sz;
      const double qx = dx - rx;
      const double qy = dy - ry;
      const double qz = dz - rz;
      const double w = extent - std::fabs(n);
      out[k] = w * (1.0 / std::sqrt(rx * rx + ry * ry + rz * rz) -
                    1.0 / std::sqrt(qx * qx + qy * qy + qz * qz));
    }
    return neumaier_sum(std::span<const double>(buf)).value();
  }
  for (std::int64_t k = 0; k < count; ++k) {
    const double n = static_cast<double>(k - half);
    const double rx = bx + n * sx;
    const double ry = by + n * sy;
    const double rz = bz + n * sz;
    const double qx = dx - rx;
    const double qy = dy - ry;
    const double qz = dz - rz;
    const double rn = std::sqrt(rx * rx + ry * ry + rz * rz);
    const double qn = std::sqrt(qx * qx + qy * qy + qz * qz);
    const double w = extent - std::fabs(n);
    out[k] = w * (g(rn) - g(qn));
  }
  return neumaier_sum(std::span<const double>(buf)).value();
}

constexpr std::size_t kFastChunks = 256;

double calibrate_seconds_per_term() {
  DomainRow row;
  row.count = 1 << 15;
  row.last_extent = (row.count + 1) / 2;
  row.origin = Vec3(-1e-6, 0.0, 0.0);
  row.step = Vec3(1e-10, 0.0, 0.0);
  const Vec3 d(4e-6, 0.0, 0.0);
  const Smearing g(1e-9);
  std::vector<double> buf;
  volatile double sink = row_sum(row, d, g, buf);  // warm-up
  const int reps = 8;
  const auto start = Clock::now();
  for (int i = 0; i < reps; ++i) sink = sink + row_sum(row, d, g, buf);
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return seconds / (reps * static_cast<double>(row.count));
}

}  // namespace

double fast_seconds_per_term() {
  static const double value = calibrate_seconds_per_term();
  return value;
}

CollapseResult delta_e_fast(const Lattice& lattice, const SuperpositionConfig& cfg,
                            const FastOptions& options) {
  cfg.validate();
  const auto start = Clock::now();
  const unsigned workers = resolve_workers(options.workers);
  const std::uint64_t terms = lattice.domain_size();
  if (!options.allow_long && static_cast<double>(terms) > options.term_budget) {
    const double estimate = static_cast<double>(terms) * fast_seconds_per_term() / workers;
    std::ostringstream msg;
    msg << "refusing " << static_cast<double>(terms) << " kernel evaluations (budget "
        << options.term_budget << "); estimated runtime " << estimate
        << " s on " << workers << " worker(s); pass allow-long to run anyway";
    throw BudgetExceeded(msg.str(), static_cast<double>(terms), estimate);
  }

  CollapseResult result;
  result.n_atoms = lattice.atom_count();
  result.term_count = terms;

  const auto& classes = lattice.pair_classes();
  std::vector<Smearing> smearing;
  smearing.reserve(classes.size());
  for (const auto& c : classes) smearing.emplace_back(effective_radius(cfg.r0, c.mean_radius_sq));

  const auto parts = partition_domain(lattice, kFastChunks);
  std::vector<NeumaierSum<double>> partial(parts.size());
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  run_chunks(parts.size(), workers, [&](std::size_t c) {
    std::vector<double> buf;
    NeumaierSum<double> acc;
    parts[c].for_each_row([&](const DomainRow& row) {
      const double s = row_sum(row, cfg.d, smearing[row.class_index], buf);
      acc.add(classes[row.class_index].mass_product * static_cast<double>(row.base_weight) * s);
    });
    partial[c] = acc;
    const std::size_t finished = ++done;
    if (options.progress) {
      std::lock_guard lock(progress_mutex);
      options.progress(static_cast<double>(finished) / static_cast<double>(parts.size()));
    }
  });

  NeumaierSum<double> total;
  for (const auto& p : partial) total.add(p);
  // Rounding can leave a tiny negative residue when the two sums coincide.
  result.delta_e = std::max(0.0, kEightPiG * total.value());
  result.tau = collapse_time(result.delta_e);
  result.wall_ms = elapsed_ms(start);
  return result;
}

namespace {

// Tile kernels of the brute path. Raw restrict pointers keep the loops
// vectorizable.
constexpr std::size_t kTile = 256;
constexpr std::size_t kMaxD = 8;

struct TileSmearing {
  std::array<double, kTile> half_inv, cut, s0, s2;
};

void smearing_tile(double r0sq, const double* __restrict msq, TileSmearing& g, std::size_t m) {
  double* __restrict h = g.half_inv.data();
  double* __restrict cut = g.cut.data();
  double* __restrict s0 = g.s0.data();
  double* __restrict s2 = g.s2.data();
  for (std::size_t j = 0; j < m; ++j) {
    const double r_eff = std::sqrt(r0sq + msq[j]);
    h[j] = 0.5 / r_eff;
    cut[j] = 1e-6 * r_eff;
    s0[j] = kInvSqrtPi / r_eff;
    s2[j] = s0[j] / (12.0 * r_eff * r_eff);
  }
}

// erf(x/2R)/x for a tile. When no distance is below `saturated` the erf is
// exactly 1 and the value reduces to the same expression erf_over_x returns.
void smeared_tile(const double* __restrict x, const TileSmearing& g, double saturated, double* __restrict out,
                  std::size_t m) {
  const double* __restrict h = g.half_inv.data();
  const double* __restrict cut = g.cut.data();
  const double* __restrict s0 = g.s0.data();
  const double* __restrict s2 = g.s2.data();
  int unsaturated = 0, small = 0, large = 0;
  for (std::size_t j = 0; j < m; ++j) {
    unsaturated |= x[j] < saturated;
    small |= x[j] * h[j] < 2.0;
    large |= x[j] * h[j] >= 2.0;
  }
  if (!unsaturated) {
    for (std::size_t j = 0; j < m; ++j) out[j] = 1.0 / (x[j] * h[j]) * h[j];
    return;
  }
  // Tiles are runs of neighbouring atoms, so usually every argument falls on
  // one side of the branch point of erf_over_x and only that side is needed.
  if (!large) {
    for (std::size_t j = 0; j < m; ++j) {
      const double exact = detail::erf_over_x_small(x[j] * h[j]) * h[j];
      out[j] = x[j] < cut[j] ? s0[j] - s2[j] * x[j] * x[j] : exact;
    }
  } else if (!small) {
    for (std::size_t j = 0; j < m; ++j) out[j] = detail::erf_over_x_large(x[j] * h[j]) * h[j];
  } else {
    for (std::size_t j = 0; j < m; ++j) {
      const double exact = erf_over_x(x[j] * h[j]) * h[j];
      out[j] = x[j] < cut[j] ? s0[j] - s2[j] * x[j] * x[j] : exact;
    }
  }
}

void distance_tile(double ox, double oy, double oz, const double* __restrict xj, const double* __restrict yj,
                   const double* __restrict zj, double sign, double* __restrict out, std::size_t m) {
  // |o - sign * (x_i - x_j)| with o = 0 or d; the caller folds x_i into o.
  for (std::size_t j = 0; j < m; ++j) {
    const double ax = ox + sign * xj[j];
    const double ay = oy + sign * yj[j];
    const double az = oz + sign * zj[j];
    out[j] = std::sqrt(ax * ax + ay * ay + az * az);
  }
}

}  // namespace

std::vector<CollapseResult> delta_e_brute_grid(const Lattice& lattice,
                                               std::span<const double> r0,
                                               std::span<const Vec3> d,
                                               const BruteOptions& options) {
  for (double r : r0) SuperpositionConfig{Vec3::Zero(), r, 0.0}.validate();
  for (const auto& v : d) SuperpositionConfig{v, 1.0, 0.0}.validate();
  const std::uint64_t n_atoms = lattice.atom_count();
  if (n_atoms > kBruteAtomCap && !options.override_cap) {
    std::ostringstream msg;
    msg << "brute force over " << n_atoms << " atoms needs "
        << static_cast<double>(n_atoms) * static_cast<double>(n_atoms)
        << " pair evaluations (quadratic cost); cap is " << kBruteAtomCap << " atoms";
    throw BudgetExceeded(msg.str(), static_cast<double>(n_atoms) * static_cast<double>(n_atoms), 0.0);
  }
  const auto start = Clock::now();

  const auto positions = lattice.positions();
  const auto species = lattice.species();
  const std::size_t n = positions.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.shuffle_seed) {
    std::mt19937_64 rng(*options.shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<double> px(n), py(n), pz(n), mass(n), radius_sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = positions[order[i]];
    const auto& atom = lattice.basis()[species[order[i]]];
    px[i] = p.x();
    py[i] = p.y();
    pz[i] = p.z();
    mass[i] = atom.mass;
    radius_sq[i] = atom.radius * atom.radius;
  }

  const std::size_t configs = r0.size() * d.size();
  const std::size_t nd = d.size();
  // Chunks are i-ranges of the upper triangle with roughly equal pair counts.
  const std::size_t chunks = std::min<std::size_t>(n, 64);
  std::vector<std::size_t> bounds(chunks + 1);
  for (std::size_t c = 0; c <= chunks; ++c) {
    const double f = static_cast<double>(c) / static_cast<double>(chunks);
    bounds[c] = static_cast<std::size_t>(std::lround(static_cast<double>(n) * (1.0 - std::sqrt(1.0 - f))));
  }
  bounds.back() = n;
  std::vector<std::vector<NeumaierSum<double>>> partial(chunks, std::vector<NeumaierSum<double>>(configs));

  // Each unordered pair {i, j}, j >= i, carries both ordered pairs: the self
  // term erf(|r|/2R)/|r| is shared, the cross terms use |d - r| and |d + r|.
  // The diagonal j == i is counted once. j runs in tiles small enough for the
  // scratch arrays to stay in L1 across every (R0, d) combination.
  if (nd > kMaxD) throw std::invalid_argument("brute grid takes at most 8 separations per pass");
  run_chunks(chunks, resolve_workers(options.workers), [&](std::size_t c) {
    std::array<double, kTile> rn, mm, msq, self, minus_v, plus_v, term;
    std::array<std::array<double, kTile>, kMaxD> minus, plus;
    TileSmearing g;
    auto& acc = partial[c];
    for (std::size_t i = bounds[c]; i < bounds[c + 1]; ++i) {
      const double xi = px[i], yi = py[i], zi = pz[i], mi = mass[i], ri = radius_sq[i];
      for (std::size_t j0 = i; j0 < n; j0 += kTile) {
        const std::size_t m = std::min(kTile, n - j0);
        const double* xj = px.data() + j0;
        const double* yj = py.data() + j0;
        const double* zj = pz.data() + j0;
        // r = x_i - x_j, so |r| = |x_i - x_j|, |d - r| = |(d - x_i) + x_j|,
        // |d + r| = |(d + x_i) - x_j|.
        distance_tile(xi, yi, zi, xj, yj, zj, -1.0, rn.data(), m);
        for (std::size_t b = 0; b < nd; ++b) {
          distance_tile(d[b].x() - xi, d[b].y() - yi, d[b].z() - zi, xj, yj, zj, 1.0, minus[b].data(), m);
          distance_tile(d[b].x() + xi, d[b].y() + yi, d[b].z() + zi, xj, yj, zj, -1.0, plus[b].data(), m);
        }
        double max_msq = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          mm[j] = 2.0 * mi * mass[j0 + j];
          msq[j] = 0.5 * (ri + radius_sq[j0 + j]);
          max_msq = msq[j] > max_msq ? msq[j] : max_msq;
        }
        // Ordered pairs (i, j) and (j, i) for j != i; the diagonal once.
        if (j0 == i) mm[0] *= 0.5;

        for (std::size_t a = 0; a < r0.size(); ++a) {
          const double r0sq = r0[a] * r0[a];
          // Past this distance erf(x/2R) is exactly 1 for every pair in the tile.
          const double saturated = 2.0 * kErfSaturation * std::sqrt(r0sq + max_msq) * (1.0 + 1e-12);
          smearing_tile(r0sq, msq.data(), g, m);
          smeared_tile(rn.data(), g, saturated, self.data(), m);
          for (std::size_t b = 0; b < nd; ++b) {
            smeared_tile(minus[b].data(), g, saturated, minus_v.data(), m);
            smeared_tile(plus[b].data(), g, saturated, plus_v.data(), m);
            for (std::size_t j = 0; j < m; ++j) term[j] = mm[j] * (self[j] - 0.5 * (minus_v[j] + plus_v[j]));
            acc[a * nd + b].add(neumaier_sum(std::span<const double>(term.data(), m)));
          }
        }
      }
    }
  });

  const double wall = elapsed_ms(start);
  std::vector<CollapseResult> out(configs);
  for (std::size_t k = 0; k < configs; ++k) {
    NeumaierSum<double> total;
    for (std::size_t c = 0; c < chunks; ++c) total.add(partial[c][k]);
    out[k].delta_e = std::max(0.0, kEightPiG * total.value());
    out[k].tau = collapse_time(out[k].delta_e);
    out[k].n_atoms = n_atoms;
    out[k].term_count = n_atoms * n_atoms;
    out[k].wall_ms = wall / static_cast<double>(configs);
  }
  return out;
}

CollapseResult delta_e_brute(const Lattice& lattice, const SuperpositionConfig& cfg,
                             const BruteOptions& options) {
  cfg.validate();
  const double r0[] = {cfg.r0};
  const Vec3 d[] = {cfg.d};
  auto result = delta_e_brute_grid(lattice, r0, d, options);
  return result.front();
}

}  // namespace dpc
