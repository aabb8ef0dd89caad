#pragma once

#include <numbers>

namespace chiralcav::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018, SI.
inline constexpr double speed_of_light = 299792458.0;        // m/s
inline constexpr double hbar = 1.054571817e-34;              // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m

inline constexpr double debye = 3.33564e-30;  // C m

// Rounded light speed used throughout the cavity mode design. The reference
// designs for the propanediol cavity were tabulated with it; the exact value
// shifts every tabulated column by about 7e-4 relative.
inline constexpr double design_light_speed = 3.0e8;

// Angular frequency from a value quoted as "2 pi x (value) Hz".
constexpr double angular(double hertz) { return two_pi * hertz; }

}  // namespace chiralcav::constants
