#pragma once

#include <numbers>

namespace dpc {

// CODATA 2018, SI.
inline constexpr double kGravitationalConstant = 6.67430e-11;  // m^3 kg^-1 s^-2
inline constexpr double kHbar = 1.054571817e-34;               // J s
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;   // kg

inline constexpr double kAngstrom = 1e-10;
inline constexpr double kNanometer = 1e-9;
inline constexpr double kMicrometer = 1e-6;

/// Perception time of the human eye, used as the classicality threshold.
inline constexpr double kTauObs = 0.01;  // s

inline constexpr double kGrapheneStep = 2.46 * kAngstrom;
inline constexpr double kGraphiteInterlayer = 3.35 * kAngstrom;
inline constexpr double kCarbonMass = 12.0 * kAtomicMassUnit;

inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kInvSqrtPi = std::numbers::inv_sqrtpi;

/// 8 pi G, the prefactor of the pair sum.
inline constexpr double kEightPiG = 8.0 * std::numbers::pi * kGravitationalConstant;

}  // namespace dpc
