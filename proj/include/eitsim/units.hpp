#pragma once

#include <string>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim {

// Canonical internal unit is angular frequency (rad/s); everything else is
// converted at the boundary.
enum class Unit { RadPerSec, Hz, MHz, Gamma13 };

inline std::string unit_name(Unit u) {
    switch (u) {
        case Unit::RadPerSec: return "rad_per_s";
        case Unit::Hz: return "hz";
        case Unit::MHz: return "mhz";
        case Unit::Gamma13: return "gamma13";
    }
    return "?";
}

inline Unit parse_unit(const std::string& s) {
    if (s == "rad_per_s") return Unit::RadPerSec;
    if (s == "hz") return Unit::Hz;
    if (s == "mhz") return Unit::MHz;
    if (s == "gamma13") return Unit::Gamma13;
    throw ValidationError("unknown unit '" + s +
                          "' (expected rad_per_s, hz, mhz, gamma13)");
}

// Scale factor turning one unit of `u` into rad/s. `gamma13` is only needed
// for Gamma13-relative values.
inline double to_rad_per_sec_factor(Unit u, double gamma13) {
    switch (u) {
        case Unit::RadPerSec: return 1.0;
        case Unit::Hz: return constants::two_pi;
        case Unit::MHz: return constants::two_pi * 1e6;
        case Unit::Gamma13:
            if (gamma13 == 0.0)
                throw ValidationError(
                    "cannot convert gamma13-relative units with gamma13 = 0");
            return gamma13;
    }
    throw ValidationError("bad unit");
}

inline double convert_units(double value, Unit from, Unit to, double gamma13 = 0.0) {
    if (from == to) return value;
    return value * to_rad_per_sec_factor(from, gamma13) /
           to_rad_per_sec_factor(to, gamma13);
}

} // namespace eitsim
