#include <cmath>
#include <random>

#include <doctest.h>

#include "dpcollapse/constants.hpp"
#include "dpcollapse/kernel.hpp"
#include "oracle.hpp"

using dpc::Vec3;

namespace {

dpc::SuperpositionConfig along_x(double d, double r0) {
  dpc::SuperpositionConfig c;
  c.d = Vec3(d, 0, 0);
  c.r0 = r0;
  return c;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("pair kernel against the 50-digit reference") {
  const double d = 4.0;
  for (double r_eff : {1e-3, 0.1, 1.0, 3.0, 50.0}) {
    for (double r : {0.0, 1e-9, 0.3, 1.0, 2.0, 3.9, 4.0, 7.5, 100.0}) {
      const double got = dpc::pair_kernel(Vec3(r, 0, 0), r_eff, Vec3(d, 0, 0));
      const double ref = oracle::pair_kernel(std::fabs(r), r_eff, std::fabs(d - r));
      // Absolute error relative to the size of the two cancelling terms.
      const double size = dpc::smeared_inverse(std::fabs(r), r_eff) + dpc::smeared_inverse(std::fabs(d - r), r_eff);
      CHECK(std::fabs(got - ref) <= 2e-15 * size);
    }
  }
}

TEST_CASE("pair kernel limits") {
  // f(0) with d far away: 1/(sqrt(pi) R) - 1/d.
  const double f = dpc::pair_kernel(Vec3::Zero(), 1.0, Vec3(1e3, 0, 0));
  CHECK(f == doctest::Approx(dpc::kInvSqrtPi - 1e-3).epsilon(1e-14));
  CHECK(dpc::pair_kernel(Vec3(1, 2, 3), 0.5, Vec3::Zero()) == 0.0);
  // Series branch is continuous with the erf branch.
  const double below = dpc::smeared_inverse(0.999e-6, 1.0);
  const double above = dpc::smeared_inverse(1.001e-6, 1.0);
  CHECK(rel(below, above) < 1e-14);
}

TEST_CASE("fast and brute agree on small lattices") {
  for (const auto& lat : {dpc::build_square_lattice(3, 3, dpc::kAngstrom, 2e-26),
                          dpc::build_graphene_sheet(4, 3),
                          dpc::build_stacked_graphene(3, 3, 2, dpc::kGraphiteInterlayer),
                          dpc::build_cubic_lattice(3, 2, 4, dpc::kAngstrom, 2e-26)}) {
    const double side = lat.longest_side();
    for (double r0 : {0.2 * dpc::kAngstrom, 1.0 * dpc::kAngstrom, side}) {
      const auto cfg = along_x(4.0 * side, r0);
      const auto fast = dpc::delta_e_fast(lat, cfg);
      const auto brute = dpc::delta_e_brute(lat, cfg);
      CHECK(rel(fast.delta_e, brute.delta_e) <= 1e-12);
      CHECK(fast.term_count == lat.domain_size());
      CHECK(brute.term_count == lat.atom_count() * lat.atom_count());
    }
  }
}

TEST_CASE("single atom closed form") {
  const auto lat = dpc::build_square_lattice(1, 1, dpc::kAngstrom, 3e-26);
  const double r0 = 2e-10, d = 7e-10;
  const double expected = dpc::kEightPiG * 9e-52 * oracle::pair_kernel(0.0, r0, d);
  CHECK(dpc::delta_e_fast(lat, along_x(d, r0)).delta_e == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("zero separation gives zero") {
  const auto lat = dpc::build_graphene_sheet(20, 20);
  const auto r = dpc::delta_e_fast(lat, along_x(0.0, dpc::kAngstrom));
  CHECK(r.delta_e == 0.0);
  CHECK(std::isinf(r.tau));
}

TEST_CASE("results do not depend on the worker count") {
  const auto lat = dpc::build_graphene_sheet(60, 45);
  const auto cfg = along_x(4.0 * lat.longest_side(), 3e-10);
  dpc::FastOptions one;
  one.workers = 1;
  const double ref = dpc::delta_e_fast(lat, cfg, one).delta_e;
  for (unsigned w : {2u, 3u, 8u}) {
    dpc::FastOptions o;
    o.workers = w;
    CHECK(dpc::delta_e_fast(lat, cfg, o).delta_e == ref);
  }
}

TEST_CASE("reflection of d leaves delta E unchanged") {
  const auto lat = dpc::build_graphene_sheet(30, 20);
  auto cfg = along_x(3.0 * lat.longest_side(), 1e-10);
  const double plus = dpc::delta_e_fast(lat, cfg).delta_e;
  cfg.d = -cfg.d;
  CHECK(rel(dpc::delta_e_fast(lat, cfg).delta_e, plus) <= 1e-12);
}

TEST_CASE("delta E is positive and decreases with R0") {
  const auto lat = dpc::build_square_lattice(40, 40, dpc::kAngstrom, 2e-26);
  const double d = 4.0 * lat.longest_side();
  double previous = std::numeric_limits<double>::infinity();
  for (double r0 = 0.1 * dpc::kAngstrom; r0 < 1e4 * dpc::kAngstrom; r0 *= 2.0) {
    const double de = dpc::delta_e_fast(lat, along_x(d, r0)).delta_e;
    CHECK(de > 0.0);
    CHECK(de < previous);
    previous = de;
  }
}

TEST_CASE("brute force is invariant under atom order") {
  const auto lat = dpc::build_graphene_sheet(8, 6);
  const auto cfg = along_x(2.0 * lat.longest_side(), 1.5e-10);
  const double ref = dpc::delta_e_brute(lat, cfg).delta_e;
  for (std::uint64_t seed : {1ull, 2ull, 99ull}) {
    dpc::BruteOptions o;
    o.shuffle_seed = seed;
    CHECK(rel(dpc::delta_e_brute(lat, cfg, o).delta_e, ref) <= 1e-13);
  }
}

TEST_CASE("brute grid matches single evaluations") {
  const auto lat = dpc::build_square_lattice(5, 4, dpc::kAngstrom, 2e-26);
  const double side = lat.longest_side();
  const std::vector<double> r0{1e-10, 5e-10};
  const std::vector<Vec3> d{Vec3(2 * side, 0, 0), Vec3(0, 3 * side, 0)};
  const auto grid = dpc::delta_e_brute_grid(lat, r0, d);
  REQUIRE(grid.size() == 4);
  for (std::size_t i = 0; i < r0.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      dpc::SuperpositionConfig c;
      c.d = d[j];
      c.r0 = r0[i];
      CHECK(rel(grid[i * d.size() + j].delta_e, dpc::delta_e_brute(lat, c).delta_e) <= 1e-13);
    }
  }
}

TEST_CASE("oversized runs are refused") {
  const auto lat = dpc::build_graphene_sheet(1000, 1000);
  dpc::FastOptions o;
  o.term_budget = 1e6;
  CHECK_THROWS_AS(dpc::delta_e_fast(lat, along_x(1e-6, 1e-10), o), dpc::BudgetExceeded);
  CHECK_THROWS_AS(dpc::delta_e_brute(lat, along_x(1e-6, 1e-10)), dpc::BudgetExceeded);
}

TEST_CASE("invalid superpositions are rejected") {
  const auto lat = dpc::build_graphene_sheet(2, 2);
  CHECK_THROWS_AS(dpc::delta_e_fast(lat, along_x(1e-9, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(dpc::delta_e_fast(lat, along_x(1e-9, -1.0)), std::invalid_argument);
  CHECK_THROWS_AS(dpc::delta_e_fast(lat, along_x(std::nan(""), 1e-10)), std::invalid_argument);
  CHECK_THROWS_AS(dpc::collapse_time(-1.0), std::invalid_argument);
  CHECK(dpc::collapse_time(2.0 * dpc::kHbar) == doctest::Approx(0.5));
}
