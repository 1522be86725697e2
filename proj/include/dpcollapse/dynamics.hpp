#pragma once

#include <limits>

#include "dpcollapse/constants.hpp"

namespace dpc {

/// Exponential noise correlation f(t) = Omega e^{-Omega |t|} / 2. An infinite
/// cutoff is white noise.
class ColoredNoise {
 public:
  static ColoredNoise white() { return ColoredNoise(std::numeric_limits<double>::infinity()); }
  explicit ColoredNoise(double omega_c);

  double omega_c() const { return omega_c_; }
  bool is_white() const { return omega_c_ == std::numeric_limits<double>::infinity(); }

 private:
  double omega_c_;
};

/// hbar / delta_e; +inf for delta_e == 0.
double tau_white(double delta_e);

/// g(t) = t [1 - (1 - e^{-Omega t}) / (Omega t)], and g(t) = t for white noise.
double g_exponential(double t, const ColoredNoise& noise);

/// Time-dependent collapse scale (hbar/delta_e) t / g(t). Requires t > 0.
double tau_colored(double delta_e, double t, const ColoredNoise& noise);

/// Time t* at which the decay exponent delta_e g(t*) / hbar reaches 1.
double colored_collapse_time(double delta_e, const ColoredNoise& noise);

struct CoherenceConfig {
  double total_mass = 0.0;  // M, kg
  double sigma = 0.0;       // wavepacket width, m
  double d = 0.0;           // separation, m
  double delta_e = 0.0;     // J
  double t = 0.0;           // s
  double tau_obs = kTauObs;
};

/// M sigma^2 / hbar, the time over which free spreading becomes relevant.
double spreading_time(double total_mass, double sigma);

struct CoherenceElements {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  double sum = 0.0;  // <-d/2| rho(t) |d/2>, 1/m^3
  /// False when t >= 1e-2 M sigma^2 / hbar, outside the short-time regime
  /// the closed forms assume.
  bool short_time = true;
};

/// Off-diagonal element of the centre-of-mass state including free
/// evolution, in the d >> sigma, short-time approximation. Requires d > 3 sigma.
CoherenceElements coherence_elements(const CoherenceConfig& cfg);

/// The same element with the free Hamiltonian dropped.
double coherence_neglect_h(const CoherenceConfig& cfg);

}  // namespace dpc
