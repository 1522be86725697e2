#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "dpcollapse/lattice.hpp"

namespace dpc {

/// R_eff intervals of the square-plate bound analysis, in increasing order.
/// Each interval is closed on the right: a value on an edge belongs to the
/// lower interval.
enum class BoundInterval {
  BelowA,       // R <= a
  AToL,         // a < R <= L
  LToHalfDmL,   // L < R <= (d - L)/2
  MidD,         // (d - L)/2 < R <= (d + 2L)/2
  HalfDp2LToD,  // (d + 2L)/2 < R <= d
  AboveD,       // d < R
};

std::string_view to_string(BoundInterval interval);

/// Monoatomic square plate: N atoms, step a, mass m, side L = sqrt(N) a.
struct SquareCrystal {
  double n_atoms = 0.0;
  double spacing = 0.0;
  double mass = 0.0;
  double side = 0.0;

  /// Throws std::invalid_argument unless the lattice is a monoatomic 2D
  /// lattice with orthogonal, equal primitive vectors and N1 == N2.
  static SquareCrystal from_lattice(const Lattice& lattice);
};

struct BoundBracket {
  double r_eff = 0.0;
  double lower = 0.0;  // J
  double upper = 0.0;  // J
  BoundInterval interval = BoundInterval::BelowA;

  /// The published upper bound can drop below the lower one inside (a, L].
  bool inverted() const { return upper < lower; }
  bool contains(double value) const { return lower <= value && value <= upper; }
};

double eta_plus();   // 2 ln(3 + 2 sqrt 2)
double eta_minus();  // asinh(1)

struct EpsilonPair {
  double minus;  // erf(1/q) q
  double plus;   // erf(q) / q
};
/// The erf factors bounding the cross sum for (d-L)/2 < R <= (d+2L)/2,
/// with q = (d - L)/(d + 2L).
EpsilonPair epsilon_factors(double d, double side);

/// Fraction of the disc of radius 2R (minus the inner disc of radius a) that
/// overlaps a plate of side L.
double geometric_factor(double side, double spacing, double r_eff);

BoundInterval classify_interval(const SquareCrystal& crystal, double d, double r_eff);

/// Closed-form lower/upper bounds on Delta E for separation d orthogonal to a
/// side. Requires d > L and r_eff > 0.
BoundBracket bound_bracket(const SquareCrystal& crystal, double d, double r_eff);

/// Delta E decreases with r_eff, so a lower bound at a larger r_eff is also a
/// lower bound at every smaller one. Lifts each lower bound to the maximum of
/// the lower bounds at r_eff >= its own. Grid order is irrelevant.
void refine_monotone(std::span<BoundBracket> brackets);

/// Plateau estimate of Delta E at r_eff ~ a for a D-dimensional crystal of N
/// atoms (D in {2, 3}).
double plateau_delta_e(int dimension, double n_atoms, double spacing, double mass);

/// (2D - 1)/D.
double plateau_exponent(int dimension);

/// Gamma(D/2) for D in {2, 3}.
double half_integer_gamma(int dimension);

/// Second-order far-field form (2/3) sqrt(pi) G m^2 N^2 d^2 / R^3.
double far_field_delta_e(double n_atoms, double mass, double d, double r_eff);

/// hbar over the far-field Delta E. Throws unless r_eff >= (d + 2L)/2.
double far_field_tau(double n_atoms, double mass, double side, double d, double r_eff);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;  // natural log
  double r_squared = 0.0;
};

/// Least squares fit of ln y = intercept + slope ln x.
LogLogFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Prefactor c of Delta E = c N^((2D-1)/D), fitted in log space with the
/// exponent held fixed. Used where no closed form exists (graphene).
double fit_plateau_prefactor(int dimension, std::span<const double> n_atoms,
                             std::span<const double> delta_e);

}  // namespace dpc
