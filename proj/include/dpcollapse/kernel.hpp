#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "dpcollapse/constants.hpp"
#include "dpcollapse/lattice.hpp"
#include "dpcollapse/special_functions.hpp"

namespace dpc {

struct SuperpositionConfig {
  Vec3 d = Vec3::Zero();  // separation of the two branches, m
  double r0 = 0.0;        // smearing length, m
  double sigma = 0.0;     // wavepacket width, m; 0 when unused

  void validate() const;
};

/// Pairwise effective radius sqrt(R0^2 + (R_a^2 + R_b^2)/2).
inline double effective_radius(double r0, double mean_radius_sq) {
  return std::sqrt(r0 * r0 + mean_radius_sq);
}

struct CollapseResult {
  double delta_e = 0.0;  // J
  double tau = std::numeric_limits<double>::infinity();  // s
  std::uint64_t n_atoms = 0;
  std::uint64_t term_count = 0;
  double wall_ms = 0.0;
};

/// hbar / delta_e, +inf at zero.
double collapse_time(double delta_e);

/// erf(x / 2R) / x, switching to the two-term series below x = 1e-6 R.
template <typename Scalar>
Scalar smeared_inverse(Scalar x, Scalar r_eff) {
  using std::acos;
  using std::sqrt;
  const Scalar two_r = Scalar(2) * r_eff;
  if (x < Scalar(1e-6) * r_eff) {
    const Scalar sqrt_pi = sqrt(acos(Scalar(-1)));
    return (Scalar(1) - x * x / (Scalar(12) * r_eff * r_eff)) / (sqrt_pi * r_eff);
  }
  return erf_over_x(x / two_r) / two_r;
}

/// f(r) = erf(|r|/2R)/|r| - erf(|d - r|/2R)/|d - r|, in 1/m.
template <typename Scalar>
Scalar pair_kernel(const Eigen::Matrix<Scalar, 3, 1>& r, Scalar r_eff,
                   const Eigen::Matrix<Scalar, 3, 1>& d) {
  return smeared_inverse<Scalar>(r.norm(), r_eff) - smeared_inverse<Scalar>((d - r).norm(), r_eff);
}

inline double pair_kernel(const Vec3& r, double r_eff, const Vec3& d) {
  return pair_kernel<double>(r, r_eff, d);
}

/// Thrown when a run would exceed the configured number of kernel evaluations.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, double terms, double estimated_seconds)
      : std::runtime_error(what), terms_(terms), estimated_seconds_(estimated_seconds) {}
  double terms() const { return terms_; }
  double estimated_seconds() const { return estimated_seconds_; }

 private:
  double terms_;
  double estimated_seconds_;
};

inline constexpr double kDefaultTermBudget = 1e12;
inline constexpr std::uint64_t kBruteAtomCap = 200000;

struct FastOptions {
  unsigned workers = 0;  // 0: hardware concurrency
  double term_budget = kDefaultTermBudget;
  bool allow_long = false;
  /// Called with the completed fraction from one thread at a time.
  std::function<void(double)> progress;
};

/// Weighted single sum over the distance domain, O(N) kernel evaluations.
CollapseResult delta_e_fast(const Lattice& lattice, const SuperpositionConfig& cfg,
                            const FastOptions& options = {});

/// Seconds per kernel evaluation on one worker, measured once per process.
double fast_seconds_per_term();

struct BruteOptions {
  bool override_cap = false;
  unsigned workers = 0;
  /// Randomizes the atom enumeration order.
  std::optional<std::uint64_t> shuffle_seed;
};

/// Direct double sum over all ordered atom pairs.
CollapseResult delta_e_brute(const Lattice& lattice, const SuperpositionConfig& cfg,
                             const BruteOptions& options = {});

/// Brute force for every (r0, d) combination in one pass over the pairs.
/// Result index is i_r0 * d.size() + i_d.
std::vector<CollapseResult> delta_e_brute_grid(const Lattice& lattice,
                                               std::span<const double> r0,
                                               std::span<const Vec3> d,
                                               const BruteOptions& options = {});

}  // namespace dpc
