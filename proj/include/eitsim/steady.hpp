#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "eitsim/errors.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

struct DensityMatrix3 {
    Eigen::Matrix3cd rho = Eigen::Matrix3cd::Zero();

    double hermiticity_error() const {
        return (rho - rho.adjoint()).norm() / std::max(1.0, rho.norm());
    }
    double trace_error() const { return std::abs(rho.trace() - 1.0); }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(
            0.5 * (rho + rho.adjoint()));
        return es.eigenvalues().minCoeff();
    }
};

struct Susceptibility {
    Complex value{0.0, 0.0}; // dimensionless chi_p
};

// Field absorption coefficient per unit length, (k_p/2) Im chi_p.
inline double absorption_coefficient(const Susceptibility& chi, double k_p) {
    return 0.5 * k_p * chi.value.imag();
}

// Phase shift per unit length, (k_p/2) Re chi_p.
inline double phase_per_length(const Susceptibility& chi, double k_p) {
    return 0.5 * k_p * chi.value.real();
}

// Weak-probe linear susceptibility,
//   chi_p = i (N mu13^2 / hbar eps0) Gamma12 / (Gamma12 Gamma13 + |Oc|^2)
// with Gamma12 = gamma12 - i delta and Gamma13 = gamma13 - i Delta1.
inline Susceptibility chi_weak_probe(const AtomicSystem& sys,
                                     const FieldDrive& control, double delta1,
                                     double delta) {
    const Complex g12(sys.gamma12, -delta);
    const Complex g13(sys.gamma13, -delta1);
    const double oc2 = std::norm(control.rabi);
    const Complex denom = g12 * g13 + oc2;
    if (denom == Complex(0.0, 0.0))
        throw SingularConfiguration(
            "chi_weak_probe: Gamma12*Gamma13 + |Omega_c|^2 vanishes exactly");
    Susceptibility out;
    out.value = Complex(0.0, 1.0) * sys.chi_prefactor() * g12 / denom;
    return out;
}

// EIT transmission half-width, gamma12 + |Omega_c|^2 / gamma13.
inline double gamma_eit(const AtomicSystem& sys, Complex omega_c) {
    if (!(sys.gamma13 > 0))
        throw DomainError("gamma_eit requires gamma13 > 0");
    return sys.gamma12 + std::norm(omega_c) / sys.gamma13;
}

// Probe absorption coefficient at Delta1 = 0,
//   alpha_p(delta) = alpha0 (gamma12 gammaEIT + delta^2)/(gammaEIT^2 + delta^2).
// k_p is needed to form alpha0 from the embedded atom parameters.
inline double absorption_on_resonance(const AtomicSystem& sys, Complex omega_c,
                                      double delta, double k_p) {
    const double alpha0 =
        k_p * sys.chi_prefactor() / (2.0 * sys.gamma13);
    const double ge = gamma_eit(sys, omega_c);
    return alpha0 * (sys.gamma12 * ge + delta * delta) / (ge * ge + delta * delta);
}

struct RamanParams {
    double gamma_r = 0.0; // rad/s, width of the Raman absorption line
    double delta_r = 0.0; // rad/s, light shift of the two-photon resonance
};

// Far-detuned two-photon resonance parameters (valid for |Delta1| >> gamma13):
//   gamma_R = gamma12 + gamma13 |Oc|^2 / Delta1^2,  delta_R = |Oc|^2 / Delta1.
inline RamanParams raman_params(const AtomicSystem& sys, Complex omega_c,
                                double delta1) {
    if (delta1 == 0.0)
        throw DomainError(
            "raman_params: Delta1 = 0; use the on-resonance expressions");
    const double oc2 = std::norm(omega_c);
    return {sys.gamma12 + sys.gamma13 * oc2 / (delta1 * delta1), oc2 / delta1};
}

struct OffResonantChi {
    Susceptibility chi;
    bool approximate = false;
    std::vector<std::string> warnings;
};

// Off-resonant probe susceptibility. The exact branch is the algebraic
// rearrangement
//   chi = i pref/Gamma13 (1 - |Oc|^2/(Gamma12 Gamma13 + |Oc|^2))
// and equals chi_weak_probe identically. The approximate branch is the
// residual-line-plus-Raman-resonance form, valid for |Delta1| >> gamma13.
inline OffResonantChi chi_off_resonant(const AtomicSystem& sys,
                                       const FieldDrive& control, double delta1,
                                       double delta, bool approximate = false) {
    OffResonantChi out;
    out.approximate = approximate;
    const double pref = sys.chi_prefactor();
    if (!approximate) {
        const Complex g12(sys.gamma12, -delta);
        const Complex g13(sys.gamma13, -delta1);
        const double oc2 = std::norm(control.rabi);
        const Complex denom = g12 * g13 + oc2;
        if (g13 == Complex(0.0, 0.0) || denom == Complex(0.0, 0.0))
            throw SingularConfiguration("chi_off_resonant: singular denominator");
        out.chi.value = Complex(0.0, 1.0) * pref / g13 * (1.0 - oc2 / denom);
        return out;
    }
    if (std::abs(delta1) < 3.0 * sys.gamma13)
        out.warnings.push_back(
            "raman approximation requested with |Delta1| < 3 gamma13; "
            "result is unreliable near one-photon resonance");
    const RamanParams rp = raman_params(sys, control.rabi, delta1);
    const Complex g13(sys.gamma13, -delta1);
    // Residual one-photon line plus the shifted narrow Raman resonance. The
    // Raman amplitude |Oc|^2/Delta1^2 is the consistent asymptotic expansion
    // of the exact branch for |Delta1| >> gamma13.
    out.chi.value = Complex(0.0, 1.0) * pref / g13 +
                    Complex(0.0, 1.0) * pref *
                        (std::norm(control.rabi) / (delta1 * delta1)) /
                        Complex(rp.gamma_r, -(delta - rp.delta_r));
    return out;
}

namespace detail {

// Right-hand side of the three-level Bloch equations in the 8 real degrees
// of freedom x = [r11, r22, Re r21, Im r21, Re r31, Im r31, Re r32, Im r32]
// with rho33 = 1 - r11 - r22 eliminated. Shared by the steady-state solver
// and the time integrator.
inline Eigen::Matrix<double, 8, 1> bloch_rhs(const AtomicSystem& sys,
                                             Complex omega_p, Complex omega_c,
                                             double delta1, double delta2,
                                             const Eigen::Matrix<double, 8, 1>& x) {
    const double delta = delta1 - delta2; // Lambda convention of the equations
    const double r11 = x[0], r22 = x[1];
    const Complex r21(x[2], x[3]), r31(x[4], x[5]), r32(x[6], x[7]);
    const double r33 = 1.0 - r11 - r22;
    const Complex i(0.0, 1.0);
    const Complex r12 = std::conj(r21), r13 = std::conj(r31),
                  r23 = std::conj(r32);

    const Complex d11 = sys.r31 * sys.gamma3 * r33 - i * omega_p * r13 +
                        i * std::conj(omega_p) * r31;
    const Complex d22 = sys.r32 * sys.gamma3 * r33 - i * omega_c * r23 +
                        i * std::conj(omega_c) * r32;
    const Complex d21 = -Complex(sys.gamma12, -delta) * r21 - i * omega_p * r23 +
                        i * std::conj(omega_c) * r31;
    const Complex d31 = -Complex(sys.gamma13, -delta1) * r31 + i * omega_c * r21 +
                        i * omega_p * (r11 - r33);
    const Complex d32 = -Complex(sys.gamma23, -delta2) * r32 + i * omega_p * r12 +
                        i * omega_c * (r22 - r33);

    Eigen::Matrix<double, 8, 1> dx;
    dx << d11.real(), d22.real(), d21.real(), d21.imag(), d31.real(), d31.imag(),
        d32.real(), d32.imag();
    return dx;
}

inline Eigen::Matrix<double, 8, 1> pack(const Eigen::Matrix3cd& rho) {
    Eigen::Matrix<double, 8, 1> x;
    x << rho(0, 0).real(), rho(1, 1).real(), rho(1, 0).real(), rho(1, 0).imag(),
        rho(2, 0).real(), rho(2, 0).imag(), rho(2, 1).real(), rho(2, 1).imag();
    return x;
}

inline Eigen::Matrix3cd unpack(const Eigen::Matrix<double, 8, 1>& x) {
    Eigen::Matrix3cd rho;
    const Complex r21(x[2], x[3]), r31(x[4], x[5]), r32(x[6], x[7]);
    rho(0, 0) = x[0];
    rho(1, 1) = x[1];
    rho(2, 2) = 1.0 - x[0] - x[1];
    rho(1, 0) = r21;
    rho(0, 1) = std::conj(r21);
    rho(2, 0) = r31;
    rho(0, 2) = std::conj(r31);
    rho(2, 1) = r32;
    rho(1, 2) = std::conj(r32);
    return rho;
}

} // namespace detail

// Full nonperturbative steady state of the Bloch equations, solved as a
// linear system in the 8 independent real degrees of freedom with the trace
// constraint rho33 = 1 - rho11 - rho22 eliminated. Lambda-scheme equations;
// both fields are kept to all orders.
inline DensityMatrix3 steady_state_numeric(const AtomicSystem& sys,
                                           const FieldDrive& probe,
                                           const FieldDrive& control) {
    if (sys.scheme != SchemeKind::Lambda)
        throw DomainError(
            "steady_state_numeric implements the Lambda-scheme equations; "
            "use the analytic susceptibility for ladder systems");
    if (!(sys.gamma3 > 0) && !(sys.gamma12 > 0))
        throw DomainError(
            "steady state requires gamma3 > 0 or gamma12 > 0 to be unique");

    using Vec8 = Eigen::Matrix<double, 8, 1>;
    using Mat8 = Eigen::Matrix<double, 8, 8>;
    const Vec8 c = detail::bloch_rhs(sys, probe.rabi, control.rabi,
                                     probe.detuning, control.detuning,
                                     Vec8::Zero());
    Mat8 A;
    for (int j = 0; j < 8; ++j) {
        Vec8 e = Vec8::Zero();
        e[j] = 1.0;
        A.col(j) = detail::bloch_rhs(sys, probe.rabi, control.rabi,
                                     probe.detuning, control.detuning, e) -
                   c;
    }

    Eigen::FullPivLU<Mat8> lu(A);
    lu.setThreshold(1e-12);
    if (lu.rank() < 8) {
        const Eigen::MatrixXd kernel = lu.kernel();
        std::ostringstream oss;
        oss << "steady state is degenerate; null direction in "
               "[r11, r22, Re r21, Im r21, Re r31, Im r31, Re r32, Im r32]: [";
        for (int i = 0; i < 8; ++i)
            oss << kernel(i, 0) << (i < 7 ? ", " : "]");
        throw DegenerateSteadyState(oss.str());
    }
    const Vec8 x = lu.solve(-c);

    DensityMatrix3 out;
    out.rho = detail::unpack(x);
    return out;
}

struct NumericChi {
    Complex value{0.0, 0.0};
    // Relative change of chi when Omega_p is halved; small iff the probe is
    // in the linear-response regime.
    double linearity_residual = 0.0;
};

// Extract chi_p from the numeric steady state via rho31 * prefactor / Omega_p.
// Valid only in the linear regime; the built-in check halves Omega_p and
// reports the relative change.
inline NumericChi chi_numeric(const AtomicSystem& sys, const FieldDrive& probe,
                              const FieldDrive& control,
                              bool check_linearity = true) {
    if (probe.rabi == Complex(0.0, 0.0))
        throw DomainError("chi_numeric requires a nonzero probe field");
    const auto extract = [&](const FieldDrive& p) {
        const DensityMatrix3 ss = steady_state_numeric(sys, p, control);
        return sys.chi_prefactor() * ss.rho(2, 0) / p.rabi;
    };
    NumericChi out;
    out.value = extract(probe);
    if (check_linearity) {
        FieldDrive half = probe;
        half.rabi *= 0.5;
        const Complex v2 = extract(half);
        out.linearity_residual =
            std::abs(v2 - out.value) / std::max(std::abs(out.value), 1e-300);
    }
    return out;
}

struct DressedPair {
    double energy_minus = 0.0; // rad/s (hbar = 1)
    double energy_plus = 0.0;
    Eigen::Vector2cd state_minus; // components over {|2>, |3>}
    Eigen::Vector2cd state_plus;
};

// Eigenpairs of the control-dressed {|2>,|3>} block. Energy offset convention:
// the bare |3> energy sits at 0, so the bare block is diag(-Delta2, 0) and the
// coupling is +Omega_c. For Delta2 = 0 and real Omega_c this gives
// E_pm = pm Omega_c with states (|2> pm |3>)/sqrt(2).
inline DressedPair dressed_states(Complex omega_c, double delta2) {
    Eigen::Matrix2cd h;
    h << Complex(-delta2, 0.0), std::conj(omega_c), omega_c, Complex(0.0, 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    DressedPair out;
    out.energy_minus = es.eigenvalues()[0];
    out.energy_plus = es.eigenvalues()[1];
    out.state_minus = es.eigenvectors().col(0);
    out.state_plus = es.eigenvectors().col(1);
    // Fix the gauge: largest component real and positive.
    for (Eigen::Vector2cd* v : {&out.state_minus, &out.state_plus}) {
        const int idx = std::abs((*v)[0]) >= std::abs((*v)[1]) ? 0 : 1;
        const Complex ph = (*v)[idx] / std::abs((*v)[idx]);
        *v /= ph;
    }
    return out;
}

} // namespace eitsim
