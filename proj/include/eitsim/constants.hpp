#pragma once

namespace eitsim::constants {

inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double eps0 = 8.8541878128e-12;     // F/m
inline constexpr double c_light = 2.99792458e8;      // m/s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

// 1 Torr in Pa.
inline constexpr double torr = 133.322;

// Default optical pressure-broadening constant, rad/s per Torr of buffer gas.
inline constexpr double pressure_broadening_per_torr = two_pi * 10.0e6;

} // namespace eitsim::constants
