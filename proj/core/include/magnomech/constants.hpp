#pragma once

#include <numbers>

namespace magnomech::constants {

// CODATA 2018 exact / recommended values.
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double boltzmann = 1.380649e-23;         // J / K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

// YIG properties used for the magnon drive Rabi frequency.
inline constexpr double gyromagnetic_ratio = two_pi * 28.0e9;  // rad s^-1 T^-1
inline constexpr double yig_spin_density = 4.22e27;            // m^-3

/// Converts a frequency quoted as omega/2pi in Hz to rad/s.
constexpr double angular(double hz) { return two_pi * hz; }

}  // namespace magnomech::constants
