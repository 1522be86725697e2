#include <cmath>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "dpcollapse/analytics.hpp"
#include "dpcollapse/constants.hpp"
#include "dpcollapse/kernel.hpp"

namespace {

dpc::SquareCrystal plate(double per_side) {
  return dpc::SquareCrystal::from_lattice(
      dpc::build_square_lattice(static_cast<std::int64_t>(per_side), static_cast<std::int64_t>(per_side),
                                dpc::kAngstrom, 2e-26));
}

}  // namespace

TEST_CASE("table constants") {
  CHECK(dpc::eta_plus() == doctest::Approx(3.525494348078172).epsilon(1e-14));
  CHECK(dpc::eta_minus() == doctest::Approx(0.881373587019543).epsilon(1e-14));
  const auto eps = dpc::epsilon_factors(4.0, 1.0);
  CHECK(eps.minus == doctest::Approx(std::erf(2.0) * 0.5).epsilon(1e-15));
  CHECK(eps.plus == doctest::Approx(std::erf(0.5) / 0.5).epsilon(1e-15));
  CHECK(eps.minus == doctest::Approx(0.5).epsilon(0.01));
  CHECK(eps.plus == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("interval edges belong to the lower interval") {
  const auto c = plate(100);
  const double L = c.side, a = c.spacing, d = 4.0 * L;
  using I = dpc::BoundInterval;
  CHECK(dpc::classify_interval(c, d, a) == I::BelowA);
  CHECK(dpc::classify_interval(c, d, std::nextafter(a, 1.0)) == I::AToL);
  CHECK(dpc::classify_interval(c, d, L) == I::AToL);
  CHECK(dpc::classify_interval(c, d, 0.5 * (d - L)) == I::LToHalfDmL);
  CHECK(dpc::classify_interval(c, d, 0.5 * (d + 2 * L)) == I::MidD);
  CHECK(dpc::classify_interval(c, d, d) == I::HalfDp2LToD);
  CHECK(dpc::classify_interval(c, d, 1.01 * d) == I::AboveD);
  CHECK(dpc::to_string(I::MidD) == "mid_d");
}

TEST_CASE("bracket forms") {
  const auto c = plate(50);
  const double N = c.n_atoms, L = c.side, d = 4.0 * L;
  const double scale = dpc::kEightPiG * c.mass * c.mass;
  const double R = 1.2 * L;
  const auto b = dpc::bound_bracket(c, d, R);
  CHECK(b.interval == dpc::BoundInterval::LToHalfDmL);
  CHECK(b.lower == doctest::Approx(scale * (N * N / (dpc::kSqrtPi * R) - N * N / (d - L))));
  CHECK(b.upper == doctest::Approx(scale * (N * N / (dpc::kSqrtPi * R) - N * N / (d + 2 * L))));
  const auto far = dpc::bound_bracket(c, d, 5.0 * d);
  CHECK(far.lower == far.upper);
  CHECK(far.lower == doctest::Approx(scale * N * N * d * d / (12.0 * dpc::kSqrtPi * 125.0 * d * d * d)));
  CHECK_THROWS_AS(dpc::bound_bracket(c, 0.5 * L, R), std::invalid_argument);
  CHECK_THROWS_AS(dpc::bound_bracket(c, d, 0.0), std::invalid_argument);
}

TEST_CASE("bracket values stay within an order of magnitude across interval edges") {
  const auto c = plate(100);
  const double L = c.side, d = 4.0 * L;
  for (double edge : {0.5 * (d - L), 0.5 * (d + 2 * L), d}) {
    const auto below = dpc::bound_bracket(c, d, edge);
    const auto above = dpc::bound_bracket(c, d, std::nextafter(edge, 1.0));
    const double mid_below = 0.5 * (below.lower + below.upper);
    const double mid_above = 0.5 * (above.lower + above.upper);
    CHECK(mid_below / mid_above < 10.0);
    CHECK(mid_above / mid_below < 10.0);
  }
}

TEST_CASE("non-square lattices are rejected for bounds") {
  CHECK_THROWS_AS(dpc::SquareCrystal::from_lattice(dpc::build_graphene_sheet(10, 10)), std::invalid_argument);
  CHECK_THROWS_AS(dpc::SquareCrystal::from_lattice(dpc::build_square_lattice(10, 11, 1.0, 1.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(dpc::SquareCrystal::from_lattice(dpc::build_cubic_lattice(3, 3, 3, 1.0, 1.0)),
                  std::invalid_argument);
}

TEST_CASE("monotone refinement lifts lower bounds only") {
  std::vector<dpc::BoundBracket> b(3);
  b[0] = {3.0, 1.0, 2.0, dpc::BoundInterval::MidD};
  b[1] = {1.0, 0.5, 9.0, dpc::BoundInterval::AToL};
  b[2] = {2.0, 4.0, 5.0, dpc::BoundInterval::LToHalfDmL};
  dpc::refine_monotone(b);
  CHECK(b[0].lower == 1.0);
  CHECK(b[2].lower == 4.0);
  CHECK(b[1].lower == 4.0);
  CHECK(b[1].upper == 9.0);
}

TEST_CASE("plateau law") {
  CHECK(dpc::plateau_exponent(2) == 1.5);
  CHECK(dpc::plateau_exponent(3) == doctest::Approx(5.0 / 3.0));
  CHECK(dpc::half_integer_gamma(3) == doctest::Approx(std::tgamma(1.5)).epsilon(1e-15));
  CHECK(dpc::half_integer_gamma(2) == std::tgamma(1.0));
  CHECK_THROWS_AS(dpc::plateau_exponent(1), std::invalid_argument);
  const double a = dpc::kAngstrom, m = 2e-26;
  const double ratio = dpc::plateau_delta_e(2, 4e6, a, m) / dpc::plateau_delta_e(2, 1e6, a, m);
  CHECK(ratio == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(dpc::plateau_delta_e(2, 1e6, a, m) ==
        doctest::Approx(dpc::kEightPiG * m * m / a * std::numbers::pi * 1e9).epsilon(1e-14));
}

TEST_CASE("far-field scaling") {
  const double base = dpc::far_field_delta_e(1e4, 2e-26, 1e-6, 1e-5);
  CHECK(dpc::far_field_delta_e(2e4, 2e-26, 1e-6, 1e-5) == doctest::Approx(4.0 * base));
  CHECK(dpc::far_field_delta_e(1e4, 2e-26, 2e-6, 1e-5) == doctest::Approx(4.0 * base));
  CHECK(dpc::far_field_delta_e(1e4, 2e-26, 1e-6, 2e-5) == doctest::Approx(base / 8.0));
  CHECK_THROWS_AS(dpc::far_field_tau(1e4, 2e-26, 1e-7, 1e-6, 5e-7), std::invalid_argument);
  CHECK(dpc::far_field_tau(1e4, 2e-26, 1e-7, 1e-6, 1e-5) == doctest::Approx(dpc::kHbar / base));
}

TEST_CASE("far field approaches the lattice sum") {
  const auto lat = dpc::build_square_lattice(20, 20, dpc::kAngstrom, 2e-26);
  const double d = 4.0 * lat.longest_side();
  dpc::SuperpositionConfig cfg;
  cfg.d = dpc::Vec3(d, 0, 0);
  double previous = 1.0;
  for (double k : {4.0, 8.0, 16.0}) {
    cfg.r0 = k * d;
    const double num = dpc::delta_e_fast(lat, cfg).delta_e;
    const double err = std::fabs(dpc::far_field_delta_e(400, 2e-26, d, k * d) / num - 1.0);
    CHECK(err < previous);
    previous = err;
  }
  CHECK(previous < 1e-3);
}

TEST_CASE("log-log fits") {
  std::vector<double> x{1, 10, 100, 1000}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.7));
  const auto fit = dpc::fit_loglog(x, y);
  CHECK(fit.slope == doctest::Approx(1.7).epsilon(1e-12));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  std::vector<double> de;
  for (double v : x) de.push_back(5.0 * std::pow(v, 1.5));
  CHECK(dpc::fit_plateau_prefactor(2, x, de) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK_THROWS_AS(dpc::fit_loglog(std::vector<double>{1.0}, std::vector<double>{1.0}), std::invalid_argument);
}
