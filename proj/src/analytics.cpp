#include "dpcollapse/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "dpcollapse/constants.hpp"
#include "dpcollapse/kernel.hpp"

namespace dpc {

std::string_view to_string(BoundInterval interval) {
  switch (interval) {
    case BoundInterval::BelowA: return "below_a";
    case BoundInterval::AToL: return "a_to_L";
    case BoundInterval::LToHalfDmL: return "L_to_half_d_minus_L";
    case BoundInterval::MidD: return "mid_d";
    case BoundInterval::HalfDp2LToD: return "half_d_plus_2L_to_d";
    case BoundInterval::AboveD: return "above_d";
  }
  return "unknown";
}

SquareCrystal SquareCrystal::from_lattice(const Lattice& lattice) {
  if (lattice.dimension() != 2) {
    throw std::invalid_argument("bounds are derived for a 2D plate only");
  }
  if (!lattice.is_monoatomic()) {
    throw std::invalid_argument("bounds are derived for a monoatomic lattice only");
  }
  const Vec3& a1 = lattice.primitive(0);
  const Vec3& a2 = lattice.primitive(1);
  const double n1 = a1.norm();
  const double n2 = a2.norm();
  if (std::abs(a1.dot(a2)) > 1e-12 * n1 * n2 || std::abs(n1 - n2) > 1e-12 * n1) {
    throw std::invalid_argument("bounds need orthogonal primitive vectors of equal length (square lattice)");
  }
  if (lattice.extent(0) != lattice.extent(1)) {
    throw std::invalid_argument("bounds need a square plate (N1 == N2)");
  }
  SquareCrystal c;
  c.n_atoms = static_cast<double>(lattice.atom_count());
  c.spacing = n1;
  c.mass = lattice.basis().front().mass;
  c.side = lattice.side_length(0);
  return c;
}

double eta_plus() { return 2.0 * std::log(3.0 + 2.0 * std::numbers::sqrt2); }
double eta_minus() { return std::asinh(1.0); }

EpsilonPair epsilon_factors(double d, double side) {
  const double q = (d - side) / (d + 2.0 * side);
  return {std::erf(1.0 / q) * q, std::erf(q) / q};
}

double geometric_factor(double side, double spacing, double r_eff) {
  const double L = side;
  const double R = r_eff;
  return L * L / (L * L + 4.0 * L * R + std::numbers::pi * R * R) * 4.0 * R * R /
         (std::numbers::pi * (4.0 * R * R - spacing * spacing));
}

BoundInterval classify_interval(const SquareCrystal& crystal, double d, double r_eff) {
  const double L = crystal.side;
  if (r_eff <= crystal.spacing) return BoundInterval::BelowA;
  if (r_eff <= L) return BoundInterval::AToL;
  if (r_eff <= 0.5 * (d - L)) return BoundInterval::LToHalfDmL;
  if (r_eff <= 0.5 * (d + 2.0 * L)) return BoundInterval::MidD;
  if (r_eff <= d) return BoundInterval::HalfDp2LToD;
  return BoundInterval::AboveD;
}

BoundBracket bound_bracket(const SquareCrystal& crystal, double d, double r_eff) {
  if (!(crystal.n_atoms >= 1.0) || !(crystal.spacing > 0.0) || !(crystal.mass > 0.0)) {
    throw std::invalid_argument("square crystal needs N >= 1, a > 0, m > 0");
  }
  if (!(d > crystal.side)) throw std::invalid_argument("bounds require d > L");
  if (!(r_eff > 0.0)) throw std::invalid_argument("bounds require r_eff > 0");

  const double N = crystal.n_atoms;
  const double a = crystal.spacing;
  const double L = crystal.side;
  const double R = r_eff;
  const double N2 = N * N;
  const double self = N / (kSqrtPi * R);       // i == j terms
  const double core = N * std::sqrt(N) / a;    // plateau scale of the i != j terms
  const double all_pairs = N2 / (kSqrtPi * R); // every pair in the short-distance limit

  BoundBracket b;
  b.r_eff = r_eff;
  b.interval = classify_interval(crystal, d, r_eff);
  double lower = 0.0;
  double upper = 0.0;
  switch (b.interval) {
    case BoundInterval::BelowA:
      lower = self + eta_minus() * core - N2 / (d - L);
      upper = self + eta_plus() * core - N2 / (d + L);
      break;
    case BoundInterval::AToL: {
      const double fg = geometric_factor(L, a, R);
      lower = self + eta_minus() * core - N2 / (d - L) + 4.0 * N * R / (kSqrtPi * a * a) -
              2.0 * std::numbers::pi * N / a * fg * (2.0 * R / a - 1.0);
      upper = self + eta_plus() * core - N2 / (d + L) + 4.0 * N * R / (a * a) * (kInvSqrtPi - 1.0);
      break;
    }
    case BoundInterval::LToHalfDmL:
      lower = all_pairs - N2 / (d - L);
      upper = all_pairs - N2 / (d + 2.0 * L);
      break;
    case BoundInterval::MidD: {
      const auto eps = epsilon_factors(d, L);
      lower = all_pairs - eps.plus * N2 / (2.0 * R);
      upper = all_pairs - eps.minus * N2 / (2.0 * R);
      break;
    }
    case BoundInterval::HalfDp2LToD:
    case BoundInterval::AboveD:
      lower = upper = N2 * d * d / (12.0 * kSqrtPi * R * R * R);
      break;
  }
  const double scale = kEightPiG * crystal.mass * crystal.mass;
  b.lower = scale * lower;
  b.upper = scale * upper;
  return b;
}

void refine_monotone(std::span<BoundBracket> brackets) {
  std::vector<std::size_t> order(brackets.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return brackets[i].r_eff > brackets[j].r_eff;
  });
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i : order) {
    best = std::max(best, brackets[i].lower);
    brackets[i].lower = best;
  }
}

double half_integer_gamma(int dimension) {
  switch (dimension) {
    case 2: return 1.0;
    case 3: return 0.5 * kSqrtPi;
    default: throw std::invalid_argument("Gamma(D/2) is tabulated for D = 2, 3 only");
  }
}

double plateau_exponent(int dimension) {
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("plateau law needs D = 2 or 3");
  return (2.0 * dimension - 1.0) / dimension;
}

double plateau_delta_e(int dimension, double n_atoms, double spacing, double mass) {
  const double exponent = plateau_exponent(dimension);
  if (!(n_atoms >= 1.0)) throw std::invalid_argument("plateau law needs N >= 1");
  if (!(spacing > 0.0) || !(mass > 0.0)) throw std::invalid_argument("plateau law needs a, m > 0");
  const double D = dimension;
  const double full_angle = std::pow(std::numbers::pi, 0.5 * D) / half_integer_gamma(dimension);
  return kEightPiG * mass * mass / spacing * full_angle * std::pow(n_atoms, exponent) /
         (std::pow(2.0, D - 2.0) * (D - 1.0));
}

double far_field_delta_e(double n_atoms, double mass, double d, double r_eff) {
  if (!(r_eff > 0.0)) throw std::invalid_argument("far field needs r_eff > 0");
  return 2.0 / 3.0 * kSqrtPi * kGravitationalConstant * mass * mass * n_atoms * n_atoms * d * d /
         (r_eff * r_eff * r_eff);
}

double far_field_tau(double n_atoms, double mass, double side, double d, double r_eff) {
  if (r_eff < 0.5 * (d + 2.0 * side)) {
    throw std::invalid_argument("far-field form requires r_eff >= (d + 2L)/2");
  }
  return collapse_time(far_field_delta_e(n_atoms, mass, d, r_eff));
}

LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("log-log fit needs at least two (x, y) pairs");
  }
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("log-log fit needs distinct x values");
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

double fit_plateau_prefactor(int dimension, std::span<const double> n_atoms,
                             std::span<const double> delta_e) {
  if (n_atoms.size() != delta_e.size() || n_atoms.empty()) {
    throw std::invalid_argument("prefactor fit needs matching, non-empty samples");
  }
  const double p = plateau_exponent(dimension);
  double acc = 0.0;
  for (std::size_t i = 0; i < n_atoms.size(); ++i) {
    acc += std::log(delta_e[i]) - p * std::log(n_atoms[i]);
  }
  return std::exp(acc / static_cast<double>(n_atoms.size()));
}

}  // namespace dpc
