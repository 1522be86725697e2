#pragma once

// Independent high-precision references used only by the tests.

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline double erf(double x) { return static_cast<double>(boost::multiprecision::erf(Real(x))); }

/// erf(|r|/2R)/|r| - erf(|d-r|/2R)/|d-r| in 50-digit arithmetic (1D distances).
inline double pair_kernel(double r, double r_eff, double dr) {
  auto term = [&](const Real& x) -> Real {
    if (x == 0) return Real(1) / (boost::multiprecision::sqrt(boost::math::constants::pi<Real>()) * r_eff);
    return boost::multiprecision::erf(x / (2 * Real(r_eff))) / x;
  };
  return static_cast<double>(term(Real(r)) - term(Real(dr)));
}

}  // namespace oracle
