#include "dpcollapse/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

namespace dpc {

ColoredNoise::ColoredNoise(double omega_c) : omega_c_(omega_c) {
  if (!(omega_c > 0.0)) throw std::invalid_argument("noise cutoff Omega_C must be positive");
}

double tau_white(double delta_e) {
  if (!(delta_e >= 0.0)) throw std::invalid_argument("delta_e must be non-negative");
  if (delta_e == 0.0) return std::numeric_limits<double>::infinity();
  return kHbar / delta_e;
}

double g_exponential(double t, const ColoredNoise& noise) {
  if (!(t >= 0.0)) throw std::invalid_argument("g(t) needs t >= 0");
  if (noise.is_white()) return t;
  const double x = noise.omega_c() * t;
  if (x < 1e-4) return noise.omega_c() * t * t * (0.5 - x / 6.0);
  return t * (1.0 + std::expm1(-x) / x);
}

double tau_colored(double delta_e, double t, const ColoredNoise& noise) {
  if (!(t > 0.0)) throw std::invalid_argument("tau(d, t) is undefined at t = 0");
  return tau_white(delta_e) * (t / g_exponential(t, noise));
}

double colored_collapse_time(double delta_e, const ColoredNoise& noise) {
  const double tw = tau_white(delta_e);
  if (std::isinf(tw) || noise.is_white()) return tw;
  // t - 1/Omega <= g(t) <= t brackets the root in [tau_w, tau_w + 1/Omega].
  const double lo = tw;
  const double hi = (tw + 1.0 / noise.omega_c()) * (1.0 + 1e-12);
  if (hi <= lo) return std::nextafter(tw, std::numeric_limits<double>::infinity());
  auto residual = [&](double t) { return g_exponential(t, noise) / tw - 1.0; };
  if (residual(hi) <= 0.0) return hi;
  const auto root = boost::math::tools::bisect(residual, lo, hi,
                                               boost::math::tools::eps_tolerance<double>(45));
  // The lower end keeps the decay exponent at or just below one.
  return root.first;
}

double spreading_time(double total_mass, double sigma) {
  return total_mass * sigma * sigma / kHbar;
}

namespace {

void validate(const CoherenceConfig& cfg) {
  if (!(cfg.total_mass > 0.0)) throw std::invalid_argument("total mass must be positive");
  if (!(cfg.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!(cfg.d > 3.0 * cfg.sigma)) throw std::invalid_argument("coherence forms need d > 3 sigma");
  if (!(cfg.delta_e >= 0.0)) throw std::invalid_argument("delta_e must be non-negative");
  if (!(cfg.t >= 0.0)) throw std::invalid_argument("t must be non-negative");
}

// 1 / N^2 for the normalized two-Gaussian state.
double inverse_norm_sq(const CoherenceConfig& cfg) {
  const double s = kSqrtPi * cfg.sigma;
  const double overlap = std::exp(-cfg.d * cfg.d / (4.0 * cfg.sigma * cfg.sigma));
  return 1.0 / (2.0 * s * s * s * (1.0 + overlap));
}

}  // namespace

CoherenceElements coherence_elements(const CoherenceConfig& cfg) {
  validate(cfg);
  const double s = cfg.t / spreading_time(cfg.total_mass, cfg.sigma);
  const double spread = 1.0 + s * s;
  const double ratio = cfg.d * cfg.d / (cfg.sigma * cfg.sigma);

  CoherenceElements k;
  k.k1 = inverse_norm_sq(cfg) * std::pow(spread, -1.5) * std::exp(-cfg.delta_e * cfg.t / kHbar);
  k.k2 = std::exp(-ratio / spread) * k.k1;
  k.k3 = 2.0 * std::exp(-0.5 * ratio / spread) * std::cos(s / spread * 0.5 * ratio) * k.k1;
  k.sum = k.k1 + k.k2 + k.k3;
  k.short_time = s < 1e-2;
  return k;
}

double coherence_neglect_h(const CoherenceConfig& cfg) {
  validate(cfg);
  const double overlap = 1.0 + std::exp(-cfg.d * cfg.d / (2.0 * cfg.sigma * cfg.sigma));
  return inverse_norm_sq(cfg) * overlap * overlap * std::exp(-cfg.delta_e * cfg.t / kHbar);
}

}  // namespace dpc
