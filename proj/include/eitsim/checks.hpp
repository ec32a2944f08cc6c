#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "eitsim/lineshape.hpp"
#include "eitsim/motion.hpp"
#include "eitsim/multilevel.hpp"
#include "eitsim/steady.hpp"
#include "eitsim/timedomain.hpp"
#include "eitsim/units.hpp"

namespace eitsim {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Fast built-in invariant suite backing the `check` subcommand.
// Deterministic (fixed seed); each entry is independent.
inline std::vector<CheckResult> run_builtin_checks() {
    std::vector<CheckResult> results;
    const auto add = [&](const std::string& name, bool ok,
                         const std::string& detail) {
        results.push_back({name, ok, detail});
    };

    {
        const double x = 1.2345;
        const double back = convert_units(
            convert_units(x, Unit::MHz, Unit::RadPerSec), Unit::RadPerSec,
            Unit::MHz);
        add("unit-round-trip", std::abs(back - x) < 1e-14,
            "MHz -> rad/s -> MHz residual " + std::to_string(back - x));
    }

    AtomicSystem sys;
    sys.gamma13 = 1.0;
    sys.gamma12 = 1e-3;
    sys.gamma23 = 1.0;
    sys.gamma3 = 2.0;
    sys.dipole13 = 3.0556e-29;
    sys.density = 1e12;

    {
        AtomicSystem perfect = sys;
        perfect.gamma12 = 0.0;
        FieldDrive control;
        control.role = FieldRole::Control;
        control.rabi = 0.3;
        const Complex chi = chi_weak_probe(perfect, control, 0.0, 0.0).value;
        // two-level comparison scale: |i pref / Gamma13| on resonance
        const double chi2 = perfect.chi_prefactor() / perfect.gamma13;
        add("perfect-transparency", std::abs(chi) < 1e-12 * chi2,
            "|chi(gamma12=0, delta=0)| / |chi_two_level| = " +
                std::to_string(std::abs(chi) / chi2));
    }

    {
        std::mt19937 rng(20260823);
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            AtomicSystem s = sys;
            s.gamma12 = 1e-4 + 1e-1 * uni(rng);
            FieldDrive probe, control;
            probe.role = FieldRole::Probe;
            control.role = FieldRole::Control;
            control.rabi = 0.1 + 1.9 * uni(rng);
            control.detuning = -2.0 + 4.0 * uni(rng);
            probe.detuning = control.detuning - 1.0 + 2.0 * uni(rng);
            probe.rabi = 1e-4 * std::max(std::abs(control.rabi), s.gamma13);
            const double delta = probe.detuning - control.detuning;
            const Complex analytic =
                chi_weak_probe(s, control, probe.detuning, delta).value;
            const Complex numeric = chi_numeric(s, probe, control).value;
            worst = std::max(worst,
                             std::abs(numeric - analytic) / std::abs(analytic));
        }
        add("oracle-equivalence-sample", worst < 1e-3,
            "worst relative deviation " + std::to_string(worst) +
                " over 20 draws");
    }

    {
        FieldDrive control;
        control.role = FieldRole::Control;
        control.rabi = 0.5;
        DetuningGrid grid{-3.0, 3.0, 41};
        const double v_th = 1.0, k_p = 0.7, k_eff = 0.7;
        Spectrum gh = doppler_average(sys, control, grid, k_p, k_eff, v_th);
        // brute-force trapezoid oracle
        double worst = 0.0;
        const std::size_t m = 40001;
        const double span = 16.0 * v_th, h = span / double(m - 1);
        double scale = 0.0;
        std::vector<Complex> ref(gh.size());
        for (std::size_t i = 0; i < gh.size(); ++i) {
            Complex acc(0.0, 0.0);
            for (std::size_t q = 0; q < m; ++q) {
                const double v = -8.0 * v_th + h * double(q);
                const double w = maxwell_weight(v, v_th) *
                                 ((q == 0 || q == m - 1) ? 0.5 : 1.0);
                acc += w * chi_weak_probe(sys, control,
                                          control.detuning + gh.delta[i] -
                                              k_p * v,
                                          gh.delta[i] - k_eff * v)
                               .value;
            }
            ref[i] = acc * h;
            scale = std::max(scale, std::abs(ref[i]));
        }
        for (std::size_t i = 0; i < gh.size(); ++i)
            worst = std::max(worst, std::abs(gh.chi[i] - ref[i]) / scale);
        add("doppler-quadrature", worst < 1e-6,
            "Gauss-Hermite vs trapezoid relative deviation " +
                std::to_string(worst));
    }

    {
        FieldDrive control;
        control.role = FieldRole::Control;
        control.rabi = 0.3;
        const double delta = 0.17, delta1 = 0.05;
        const Complex three =
            chi_weak_probe(sys, control, delta1, delta).value;
        ProbeRoot root;
        root.alpha0 = sys.chi_prefactor() / sys.gamma13;
        root.gamma = sys.gamma13;
        root.delta = delta1;
        root.children.push_back({control.rabi, sys.gamma12, delta, {}});
        // chi_nested returns alpha0 gamma/(...); Eq. (11) gives
        // i pref Gamma12/(Gamma12 Gamma13 + Oc^2) = i pref /(Gamma13 + Oc^2/Gamma12)
        const Complex nested = chi_nested(root) * Complex(0.0, 1.0);
        const double rel = std::abs(nested - three) / std::abs(three);
        add("nested-depth1-equivalence", rel < 1e-12,
            "relative deviation " + std::to_string(rel));
    }

    {
        const DressedPair dp = dressed_states(Complex(0.4, 0.0), 0.0);
        const bool ok = std::abs(dp.energy_plus - 0.4) < 1e-12 &&
                        std::abs(dp.energy_minus + 0.4) < 1e-12;
        add("autler-townes-doublet", ok,
            "E_+/- = " + std::to_string(dp.energy_plus) + ", " +
                std::to_string(dp.energy_minus));
    }

    {
        FitModel truth{FitModelKind::Lorentzian, {2.0, 0.3, 0.05, 0.1}};
        DetuningGrid grid{-3.0, 3.0, 201};
        std::vector<double> x = grid.values(), y(x.size());
        for (std::size_t i = 0; i < x.size(); ++i)
            y[i] = eval_model(truth, x[i]);
        FitResult fr = fit(x, y, FitModelKind::Lorentzian);
        double worst = 0.0;
        for (std::size_t i = 0; i < 4; ++i)
            worst = std::max(worst, std::abs(fr.model.params[i] -
                                             truth.params[i]) /
                                        std::abs(truth.params[i]));
        add("lorentzian-fit-round-trip", fr.converged && worst < 1e-6,
            "worst parameter deviation " + std::to_string(worst));
    }

    return results;
}

} // namespace eitsim
