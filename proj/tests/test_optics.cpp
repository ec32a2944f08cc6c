#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "eitsim/optics.hpp"
#include "eitsim/steady.hpp"

using namespace eitsim;

namespace {

AtomicSystem unit_system() {
    AtomicSystem sys;
    sys.gamma13 = 1.0;
    sys.gamma12 = 1e-3;
    sys.gamma23 = 1.0;
    sys.gamma3 = 2.0;
    sys.dipole13 = 3.0556e-29; // chi_prefactor == 1 at this density
    sys.density = 1e12;
    return sys;
}

// Weak-probe EIT spectrum under probe-scan semantics (Lambda, Delta2 = 0).
Spectrum eit_spectrum(const AtomicSystem& sys, Complex omega_c,
                      const DetuningGrid& grid) {
    FieldDrive control;
    control.role = FieldRole::Control;
    control.rabi = omega_c;
    Spectrum out;
    out.delta = grid.values();
    out.chi.reserve(out.delta.size());
    for (double d : out.delta)
        out.chi.push_back(chi_weak_probe(sys, control, d, d).value);
    return out;
}

MediumSpec make_medium(const AtomicSystem& sys, double k_p, double length) {
    MediumSpec m;
    m.atom = sys;
    m.k_probe = k_p;
    m.length = length;
    return m;
}

} // namespace

TEST_CASE("alpha0 identity, linearity, and validation") {
    AtomicSystem sys = unit_system();
    const double k_p = 100.0;
    CHECK(alpha0(sys, k_p) ==
          doctest::Approx(k_p * sys.chi_prefactor() / (2.0 * sys.gamma13))
              .epsilon(1e-14));

    AtomicSystem doubled = sys;
    doubled.density *= 2.0;
    CHECK(alpha0(doubled, k_p) ==
          doctest::Approx(2.0 * alpha0(sys, k_p)).epsilon(1e-14));
    CHECK(alpha0(sys, 2.0 * k_p) ==
          doctest::Approx(2.0 * alpha0(sys, k_p)).epsilon(1e-14));

    CHECK_THROWS_AS(alpha0(sys, 0.0), ValidationError);
    AtomicSystem bad = sys;
    bad.gamma13 = 0.0;
    CHECK_THROWS_AS(alpha0(bad, k_p), DomainError);
}

TEST_CASE("transmission pointwise values") {
    AtomicSystem sys = unit_system();
    const MediumSpec medium = make_medium(sys, 100.0, 0.1); // k_p L = 10

    SUBCASE("two-level center gives T = exp(-OD)") {
        Spectrum spec = eit_spectrum(sys, Complex(0.0, 0.0),
                                     DetuningGrid{-1e-6, 1e-6, 3});
        const TransmissionSpectrum t = transmission_spectrum(spec, medium);
        // Im chi(0) = pref/gamma13, so -ln T = k_p L pref
        const double od = 10.0 * sys.chi_prefactor() / sys.gamma13;
        CHECK(t.transmission[1] == doctest::Approx(std::exp(-od)).epsilon(1e-9));
    }

    SUBCASE("ideal EIT is perfectly transparent on resonance") {
        AtomicSystem ideal = sys;
        ideal.gamma12 = 0.0;
        Spectrum spec = eit_spectrum(ideal, Complex(0.3, 0.0),
                                     DetuningGrid{-1e-3, 1e-3, 3});
        const TransmissionSpectrum t = transmission_spectrum(spec, medium);
        CHECK(t.transmission[1] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(t.phase[1] == doctest::Approx(0.0).epsilon(1e-14));
    }

    SUBCASE("10% residual absorption at OD 10 gives T(0) = 1/e") {
        // suppression = g12 g13/(g12 g13 + Oc^2) = 0.1 at g12 = Oc^2/(9 g13)
        AtomicSystem s = sys;
        s.gamma12 = 0.01;
        Spectrum spec = eit_spectrum(s, Complex(0.3, 0.0),
                                     DetuningGrid{-1e-9, 1e-9, 3});
        const TransmissionSpectrum t = transmission_spectrum(spec, medium);
        const double od = sys.chi_prefactor() / sys.gamma13; // 10 * 10% residual
        CHECK(t.transmission[1] ==
              doctest::Approx(std::exp(-od)).epsilon(1e-9));
    }
}

TEST_CASE("figures of merit on a synthetic dip") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-5;
    const Complex oc(std::sqrt(1e-3), 0.0); // gamma_EIT ~ 1.01e-3
    const double ge = gamma_eit(sys, oc);
    const MediumSpec medium = make_medium(sys, 100.0, 0.1); // OD_true = 10

    const DetuningGrid grid{-20.0 * ge, 20.0 * ge, 801};
    const Spectrum spec = eit_spectrum(sys, oc, grid);
    const FiguresOfMerit fom =
        figures_of_merit(transmission_spectrum(spec, medium), medium);

    CHECK(fom.od == doctest::Approx(10.0).epsilon(0.01));
    CHECK(fom.gamma_eit_fit == doctest::Approx(ge).epsilon(0.01));
    CHECK(fom.od_eit == doctest::Approx(10.0).epsilon(0.03));
    CHECK(fom.bandwidth ==
          doctest::Approx(fom.gamma_eit_fit / std::sqrt(fom.od_eit - 1.0))
              .epsilon(1e-12));
    CHECK(fom.delay == doctest::Approx(fom.od_eit / fom.gamma_eit_fit)
                           .epsilon(1e-12));
    CHECK(fom.tbp == doctest::Approx(fom.bandwidth * fom.delay).epsilon(1e-12));
}

TEST_CASE("time-bandwidth product scales as sqrt(OD_EIT)") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-6;
    const Complex oc(std::sqrt(4e-3), 0.0);
    const double ge = gamma_eit(sys, oc);
    const MediumSpec medium = make_medium(sys, 250.0, 0.1); // OD_true = 25

    const DetuningGrid grid{-20.0 * ge, 20.0 * ge, 801};
    const Spectrum spec = eit_spectrum(sys, oc, grid);
    const FiguresOfMerit fom =
        figures_of_merit(transmission_spectrum(spec, medium), medium);
    CHECK(fom.od_eit == doctest::Approx(25.0).epsilon(0.05));
    // exact law gives OD/sqrt(OD-1) = 25/sqrt(24) ~ 5.10, close to sqrt(OD)
    CHECK(fom.tbp == doctest::Approx(std::sqrt(25.0)).epsilon(0.15));
}

TEST_CASE("no dip raises NoResonance") {
    AtomicSystem sys = unit_system();
    const MediumSpec medium = make_medium(sys, 100.0, 0.1);
    const Spectrum spec = eit_spectrum(sys, Complex(0.0, 0.0),
                                       DetuningGrid{-0.05, 0.05, 101});
    CHECK_THROWS_AS(
        figures_of_merit(transmission_spectrum(spec, medium), medium),
        NoResonance);
    TransmissionSpectrum tiny;
    tiny.delta = {0.0, 1.0};
    tiny.transmission = {1.0, 1.0};
    tiny.phase = {0.0, 0.0};
    CHECK_THROWS_AS(figures_of_merit(tiny, medium), ValidationError);
}

TEST_CASE("refractive index: unity on resonance, odd, anomalous-free slope") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-5;
    const Complex oc(0.05, 0.0);
    const double ge = gamma_eit(sys, oc);
    const MediumSpec medium = make_medium(sys, 100.0, 0.1);
    const DetuningGrid grid{-2.0 * ge, 2.0 * ge, 401};
    const Spectrum spec = eit_spectrum(sys, oc, grid);
    const RefractiveIndex ri = refractive_index(spec, medium, oc);

    const std::size_t mid = ri.n.size() / 2;
    CHECK(std::abs(ri.n[mid] - 1.0) < 1e-12);
    CHECK(std::abs(ri.n_approx[mid] - 1.0) < 1e-12);
    for (std::size_t i = 0; i < mid; ++i) {
        CHECK(ri.n[i] - 1.0 ==
              doctest::Approx(-(ri.n[ri.n.size() - 1 - i] - 1.0))
                  .epsilon(1e-10));
    }
    // normal dispersion inside the window
    CHECK(ri.n[mid + 1] > ri.n[mid]);
    CHECK(ri.n[mid] > ri.n[mid - 1]);
}

TEST_CASE("closed-form index tracks the exact one inside the window") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-6;
    const Complex oc(0.03, 0.0);
    const double ge = gamma_eit(sys, oc);
    const MediumSpec medium = make_medium(sys, 100.0, 0.1);
    const DetuningGrid grid{-0.5 * ge, 0.5 * ge, 41};
    const Spectrum spec = eit_spectrum(sys, oc, grid);
    const RefractiveIndex ri = refractive_index(spec, medium, oc);
    for (std::size_t i = 0; i < ri.n.size(); ++i) {
        if (std::abs(ri.delta[i]) < 0.05 * ge) continue;
        CHECK(ri.n_approx[i] - 1.0 ==
              doctest::Approx(ri.n[i] - 1.0).epsilon(0.05));
    }
}

TEST_CASE("group velocity channels and their known prefactor gap") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-6;
    const double k_p = 100.0, L = 0.1;
    const double nu_p = k_p * constants::c_light / constants::two_pi;
    const MediumSpec medium = make_medium(sys, k_p, L);

    const auto run = [&](Complex oc) {
        const double ge = gamma_eit(sys, oc);
        const DetuningGrid grid{-2.0 * ge, 2.0 * ge, 401};
        return group_velocity(eit_spectrum(sys, oc, grid), medium, nu_p, oc);
    };

    const GroupVelocity slow = run(Complex(0.05, 0.0));
    const GroupVelocity fast = run(Complex(0.15, 0.0));
    CHECK(slow.vg_numeric > 0.0);
    CHECK(fast.vg_numeric > slow.vg_numeric); // stronger control, faster light
    // documented prefactor gap between the channels: vg_num/vg_ana ~ 1/(2 pi)
    CHECK(slow.consistency ==
          doctest::Approx(1.0 / constants::two_pi).epsilon(0.05));
    CHECK(fast.consistency ==
          doctest::Approx(1.0 / constants::two_pi).epsilon(0.05));
}

TEST_CASE("physical group delay matches the figures-of-merit delay") {
    AtomicSystem sys = unit_system();
    sys.gamma12 = 1e-6;
    const Complex oc(std::sqrt(1e-3), 0.0);
    const double ge = gamma_eit(sys, oc);
    const double k_p = 100.0, L = 0.1;
    const double nu_p = k_p * constants::c_light / constants::two_pi;
    const MediumSpec medium = make_medium(sys, k_p, L);

    const DetuningGrid grid{-20.0 * ge, 20.0 * ge, 2001};
    const Spectrum spec = eit_spectrum(sys, oc, grid);
    const GroupVelocity gv = group_velocity(spec, medium, nu_p, oc);
    const FiguresOfMerit fom =
        figures_of_merit(transmission_spectrum(spec, medium), medium);

    const double delay_phys =
        L / gv.vg_numeric - L / constants::c_light;
    CHECK(delay_phys > 0.0);
    CHECK(delay_phys / fom.delay > 0.5);
    CHECK(delay_phys / fom.delay < 2.0);
}

TEST_CASE("dilute medium propagates at c") {
    AtomicSystem sys = unit_system();
    sys.density = 1e-9; // alpha0 -> 0
    const Complex oc(0.05, 0.0);
    const double ge = gamma_eit(sys, oc);
    const MediumSpec medium = make_medium(sys, 100.0, 0.1);
    const DetuningGrid grid{-2.0 * ge, 2.0 * ge, 401};
    const GroupVelocity gv = group_velocity(eit_spectrum(sys, oc, grid),
                                            medium, 4.77e9, oc);
    CHECK(gv.vg_numeric == doctest::Approx(constants::c_light).epsilon(1e-6));
}

TEST_CASE("coarse grid raises ResolutionError") {
    AtomicSystem sys = unit_system();
    const Complex oc(0.05, 0.0);
    const MediumSpec medium = make_medium(sys, 100.0, 0.1);
    const DetuningGrid grid{-1.0, 1.0, 21}; // step >> gamma_EIT/10
    CHECK_THROWS_AS(group_velocity(eit_spectrum(sys, oc, grid), medium,
                                   4.77e9, oc),
                    ResolutionError);
}

TEST_CASE("passivity over random configurations") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        AtomicSystem sys = unit_system();
        sys.gamma12 = 1e-4 + 0.05 * uni(rng);
        const Complex oc(0.05 + 0.5 * uni(rng), 0.5 * (uni(rng) - 0.5));
        const MediumSpec medium =
            make_medium(sys, 10.0 + 200.0 * uni(rng), 0.01 + 0.2 * uni(rng));
        const DetuningGrid grid{-2.0, 2.0, 101};
        const TransmissionSpectrum t =
            transmission_spectrum(eit_spectrum(sys, oc, grid), medium);
        for (std::size_t i = 0; i < t.transmission.size(); ++i) {
            CHECK(t.transmission[i] > 0.0);
            CHECK(t.transmission[i] <= 1.0 + 1e-15);
            CHECK(std::isfinite(t.phase[i]));
        }
    }
}
