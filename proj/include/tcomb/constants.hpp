#pragma once

#include <numbers>

namespace tcomb::constants {

// CODATA 2018 exact values (SI).
inline constexpr double planck = 6.62607015e-34;             // J s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);  // J s
inline constexpr double boltzmann = 1.380649e-23;            // J/K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace tcomb::constants
