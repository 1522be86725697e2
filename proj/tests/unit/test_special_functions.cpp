#include <cmath>
#include <numbers>

#include <doctest.h>

#include "dpcollapse/special_functions.hpp"
#include "dpcollapse/summation.hpp"
#include "oracle.hpp"

TEST_CASE("erf matches 50-digit reference on [0, 6]") {
  double worst = 0.0;
  for (int i = 1; i <= 60000; ++i) {
    const double x = 6.0 * i / 60000.0;
    const double ref = oracle::erf(x);
    worst = std::max(worst, std::fabs(dpc::erf(x) - ref) / ref);
    worst = std::max(worst, std::fabs(dpc::erf_over_x(x) * x - ref) / ref);
  }
  CHECK(worst <= 1e-15);
}

TEST_CASE("erf near the origin and past saturation") {
  CHECK(dpc::erf_over_x(0.0) == doctest::Approx(2.0 * std::numbers::inv_sqrtpi).epsilon(1e-15));
  CHECK(dpc::erf(0.0) == 0.0);
  CHECK(dpc::erf(-1.5) == -dpc::erf(1.5));
  CHECK(dpc::erf(6.0) == 1.0);
  CHECK(dpc::erf_over_x(7.0) == 1.0 / 7.0);
  CHECK(dpc::erf_over_x(1e300) == 1e-300);
}

TEST_CASE("compensated sums") {
  const std::vector<double> cancel{1.0, 1e100, 1.0, -1e100};
  CHECK(dpc::neumaier_sum(std::span<const double>(cancel)).value() == 2.0);
  dpc::NeumaierSum<double> c;
  for (double x : cancel) c += x;
  CHECK(c.value() == 2.0);

  std::vector<double> many;
  oracle::Real exact = 0;
  for (int i = 0; i < 100003; ++i) {
    many.push_back(0.1 + 1e-7 * i);
    exact += oracle::Real(many.back());
  }
  const double ref = static_cast<double>(exact);
  dpc::NeumaierSum<double> s;
  for (double x : many) s += x;
  CHECK(std::fabs(s.value() - ref) <= 1e-16 * ref);
  CHECK(std::fabs(dpc::neumaier_sum(std::span<const double>(many)).value() - ref) <= 1e-16 * ref);
}
