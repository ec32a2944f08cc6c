#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/units.hpp"

namespace eitsim {

using Complex = std::complex<double>;

enum class SchemeKind { Lambda, Ladder };

inline std::string scheme_name(SchemeKind s) {
    return s == SchemeKind::Lambda ? "lambda" : "ladder";
}

// Three-level system with probe on |1>-|3>, control on |2>-|3> (Lambda) or
// |2> above |3> (ladder). All rates are angular frequencies (rad/s).
//
// Rabi convention throughout: Omega = mu E / hbar, no factor 1/2.
struct AtomicSystem {
    SchemeKind scheme = SchemeKind::Lambda;
    double gamma13 = 0.0;  // optical decoherence of rho_31
    double gamma12 = 0.0;  // two-photon (spin) decoherence of rho_21
    double gamma23 = 0.0;  // decoherence of rho_32
    double gamma3 = 0.0;   // population decay rate of |3>
    double r31 = 0.5;      // branching |3> -> |1>
    double r32 = 0.5;      // branching |3> -> |2>
    double omega12 = 0.0;  // |1>-|2> transition angular frequency
    double dipole13 = 0.0; // C m
    double density = 0.0;  // m^-3

    // Throws ValidationError on hard invariant violations; returns soft
    // warnings (e.g. gamma12 not small against gamma13).
    std::vector<std::string> validate() const {
        if (gamma13 < 0 || gamma12 < 0 || gamma23 < 0 || gamma3 < 0)
            throw ValidationError("atomic rates must be nonnegative");
        if (std::abs(r31 + r32 - 1.0) > 1e-9)
            throw ValidationError("closed system requires r31 + r32 = 1, got " +
                                  std::to_string(r31 + r32));
        if (r31 < 0 || r32 < 0)
            throw ValidationError("branching ratios must be nonnegative");
        if (gamma13 < gamma3 / 2.0 * (1.0 - 1e-12))
            throw ValidationError(
                "gamma13 must be at least gamma3/2 (radiative half-rate)");
        if (dipole13 < 0 || density < 0)
            throw ValidationError("dipole13 and density must be nonnegative");
        std::vector<std::string> warnings;
        if (gamma13 > 0 && gamma12 > 0.5 * gamma13)
            warnings.push_back("gamma12 is not small against gamma13 (" +
                               std::to_string(gamma12 / gamma13) +
                               " gamma13); EIT contrast will be poor");
        return warnings;
    }

    // N mu^2 / (hbar eps0), the susceptibility prefactor of the probe line.
    double chi_prefactor() const {
        return density * dipole13 * dipole13 /
               (constants::hbar * constants::eps0);
    }
};

enum class FieldRole { Probe, Control };

struct FieldDrive {
    Complex rabi{0.0, 0.0};              // rad/s
    double detuning = 0.0;               // rad/s (Delta_1 or Delta_2)
    std::array<double, 3> wavevector{0.0, 0.0, 0.0}; // rad/m
    FieldRole role = FieldRole::Probe;

    double k_magnitude() const {
        return std::sqrt(wavevector[0] * wavevector[0] +
                         wavevector[1] * wavevector[1] +
                         wavevector[2] * wavevector[2]);
    }
};

// Two-photon detuning and effective wavevector for a probe/control pair.
// Lambda: delta = Delta1 - Delta2, k_eff = k_p - k_c (vector difference).
// Ladder: delta = Delta1 + Delta2, k_eff = k_p + k_c.
struct TwoPhotonConfig {
    double delta = 0.0; // rad/s
    double k_eff = 0.0; // rad/m, magnitude of the effective wavevector

    static TwoPhotonConfig from(SchemeKind scheme, const FieldDrive& probe,
                                const FieldDrive& control) {
        const double sign = scheme == SchemeKind::Lambda ? -1.0 : 1.0;
        std::array<double, 3> k{};
        for (int i = 0; i < 3; ++i)
            k[i] = probe.wavevector[i] + sign * control.wavevector[i];
        TwoPhotonConfig out;
        out.delta = probe.detuning + sign * control.detuning;
        out.k_eff = std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]);
        return out;
    }
};

struct DetuningGrid {
    double start = 0.0; // rad/s after unit resolution
    double stop = 0.0;
    std::size_t points = 2;
    Unit unit_hint = Unit::RadPerSec;

    void validate() const {
        if (points < 2) throw ValidationError("grid needs at least 2 points");
        if (!(start < stop))
            throw ValidationError("grid must be strictly increasing");
    }

    std::vector<double> values() const {
        validate();
        std::vector<double> v(points);
        const double h = (stop - start) / double(points - 1);
        for (std::size_t i = 0; i < points; ++i) v[i] = start + h * double(i);
        v.back() = stop;
        return v;
    }

    double step() const { return (stop - start) / double(points - 1); }
};

// Thermal-motion parameters. diffusion = 0 means ballistic regime.
struct MotionEnvironment {
    double v_th = 0.0;          // m/s, rms 1-D thermal velocity
    double diffusion = 0.0;     // m^2/s
    double waist_probe = 0.0;   // m
    double waist_control = 0.0; // m
    double waist_generic = 0.0; // m
    double gamma13_col = 0.0;   // rad/s, optical pressure broadening
    double gamma12_col = 0.0;   // rad/s, spin collisional broadening
    double buffer_pressure = 0.0; // Pa, informational

    void validate() const {
        if (v_th < 0 || diffusion < 0 || waist_probe < 0 || waist_control < 0 ||
            waist_generic < 0 || gamma13_col < 0 || gamma12_col < 0 ||
            buffer_pressure < 0)
            throw ValidationError("motion parameters must be nonnegative");
    }
};

struct MediumSpec {
    double length = 0.0;  // m
    AtomicSystem atom;
    double k_probe = 0.0; // rad/m

    void validate() const {
        if (!(length > 0)) throw ValidationError("medium length must be > 0");
        if (!(k_probe > 0)) throw ValidationError("probe wavevector must be > 0");
    }
};

// Sampled complex susceptibility over a detuning grid.
struct Spectrum {
    std::vector<double> delta;   // rad/s
    std::vector<Complex> chi;
    std::vector<std::string> warnings;

    std::size_t size() const { return delta.size(); }
};

} // namespace eitsim
