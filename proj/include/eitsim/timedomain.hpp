#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "eitsim/errors.hpp"
#include "eitsim/steady.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

using StateVector3 = Eigen::Vector3cd; // amplitudes over {|1>,|2>,|3>}

struct DarkBright {
    StateVector3 dark;
    StateVector3 bright;
};

// Dark and bright superpositions of the two ground states:
//   |D> = (Op |2> - Oc |1>)/Omega,  |B> = (Op* |1> + Oc* |2>)/Omega,
// Omega = sqrt(|Op|^2 + |Oc|^2).
inline DarkBright dark_state(Complex omega_p, Complex omega_c) {
    const double omega = std::sqrt(std::norm(omega_p) + std::norm(omega_c));
    if (omega == 0.0)
        throw DomainError("dark_state: both Rabi frequencies are zero");
    DarkBright out;
    out.dark << -omega_c / omega, omega_p / omega, 0.0;
    out.bright << std::conj(omega_p) / omega, std::conj(omega_c) / omega, 0.0;
    return out;
}

// Free evolution of the prepared dark state at two-photon detuning delta:
//   |D_delta(t)> = (Op |2> - e^{i delta t} Oc |1>)/Omega.
inline StateVector3 dark_state_evolved(Complex omega_p, Complex omega_c,
                                       double delta, double t) {
    const double omega = std::sqrt(std::norm(omega_p) + std::norm(omega_c));
    if (omega == 0.0)
        throw DomainError("dark_state_evolved: both Rabi frequencies are zero");
    StateVector3 v;
    v << -std::exp(Complex(0.0, delta * t)) * omega_c / omega, omega_p / omega,
        0.0;
    return v;
}

// Rotating-frame Hamiltonian (hbar = 1) over {|1>,|2>,|3>} with the |3>
// energy at zero; used by the dark-state tests.
inline Eigen::Matrix3cd rwa_hamiltonian(Complex omega_p, Complex omega_c,
                                        double delta1, double delta2) {
    Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
    h(0, 0) = -delta1;
    h(1, 1) = -delta2;
    h(0, 2) = -std::conj(omega_p);
    h(2, 0) = -omega_p;
    h(1, 2) = -std::conj(omega_c);
    h(2, 1) = -omega_c;
    return h;
}

// Time-dependent drive: fixed detuning, complex Rabi envelope sampled by the
// integrator. Phase flips and pulse shapes go through the envelope.
struct TimeDependentDrive {
    std::function<Complex(double)> rabi;
    double detuning = 0.0;
};

struct Trajectory {
    std::vector<double> time;             // s
    std::vector<DensityMatrix3> samples;
    double error_estimate = 0.0;          // accumulated local error bound
};

struct IntegratorOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double initial_step = 0.0; // 0 = automatic
};

namespace detail {

// One Cash-Karp RK45 step; returns the 5th-order solution and the embedded
// error estimate.
template <typename F>
void rk45_step(const F& f, double t, double h,
               const Eigen::Matrix<double, 8, 1>& x,
               Eigen::Matrix<double, 8, 1>& out, double& err) {
    using V = Eigen::Matrix<double, 8, 1>;
    static constexpr double a2 = 0.2, a3 = 0.3, a4 = 0.6, a5 = 1.0, a6 = 0.875;
    const V k1 = f(t, x);
    const V k2 = f(t + a2 * h, x + h * (0.2 * k1));
    const V k3 = f(t + a3 * h, x + h * (3.0 / 40.0 * k1 + 9.0 / 40.0 * k2));
    const V k4 = f(t + a4 * h, x + h * (0.3 * k1 - 0.9 * k2 + 1.2 * k3));
    const V k5 = f(t + a5 * h, x + h * (-11.0 / 54.0 * k1 + 2.5 * k2 -
                                        70.0 / 27.0 * k3 + 35.0 / 27.0 * k4));
    const V k6 =
        f(t + a6 * h,
          x + h * (1631.0 / 55296.0 * k1 + 175.0 / 512.0 * k2 +
                   575.0 / 13824.0 * k3 + 44275.0 / 110592.0 * k4 +
                   253.0 / 4096.0 * k5));
    out = x + h * (37.0 / 378.0 * k1 + 250.0 / 621.0 * k3 + 125.0 / 594.0 * k4 +
                   512.0 / 1771.0 * k6);
    const V x4 = x + h * (2825.0 / 27648.0 * k1 + 18575.0 / 48384.0 * k3 +
                          13525.0 / 55296.0 * k4 + 277.0 / 14336.0 * k5 +
                          0.25 * k6);
    err = (out - x4).cwiseAbs().maxCoeff();
}

} // namespace detail

// Adaptive integration of the Bloch equations along an increasing time grid.
// The state is the 8-real-parameter Bloch vector, so Hermiticity and unit
// trace hold by construction; each output sample is additionally repaired.
inline Trajectory evolve_bloch(const AtomicSystem& sys,
                               const TimeDependentDrive& probe,
                               const TimeDependentDrive& control,
                               const DensityMatrix3& rho0,
                               const std::vector<double>& grid,
                               const IntegratorOptions& opts = {}) {
    if (grid.size() < 2)
        throw ValidationError("evolve_bloch: time grid needs >= 2 points");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError("evolve_bloch: time grid must increase");

    using V = Eigen::Matrix<double, 8, 1>;
    const auto f = [&](double t, const V& x) {
        return detail::bloch_rhs(sys, probe.rabi(t), control.rabi(t),
                                 probe.detuning, control.detuning, x);
    };

    Trajectory traj;
    traj.time = grid;
    traj.samples.reserve(grid.size());
    V x = detail::pack(rho0.rho);
    traj.samples.push_back(DensityMatrix3{detail::unpack(x)});

    const double span = grid.back() - grid.front();
    double h = opts.initial_step > 0 ? opts.initial_step : span / 1000.0;
    double t = grid.front();
    double accumulated = 0.0;

    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double t_end = grid[i];
        while (t < t_end) {
            h = std::min(h, t_end - t);
            V xn;
            double err = 0.0;
            detail::rk45_step(f, t, h, x, xn, err);
            const double scale =
                opts.abs_tol + opts.rel_tol * x.cwiseAbs().maxCoeff();
            if (err <= scale || h <= 16.0 * std::abs(t) *
                                          std::numeric_limits<double>::epsilon()) {
                if (h <= span * 1e-14)
                    throw IntegrationFailure(
                        "evolve_bloch: step size underflow at t = " +
                        std::to_string(t));
                t += h;
                x = xn;
                accumulated += err;
                if (err > 0)
                    h *= std::min(5.0, 0.9 * std::pow(scale / err, 0.2));
                else
                    h *= 5.0;
            } else {
                h *= std::max(0.1, 0.9 * std::pow(scale / err, 0.25));
                if (h <= span * 1e-14)
                    throw IntegrationFailure(
                        "evolve_bloch: step size underflow at t = " +
                        std::to_string(t));
            }
        }
        // The 8-parameter representation is Hermitian and unit-trace already;
        // unpack and store.
        traj.samples.push_back(DensityMatrix3{detail::unpack(x)});
    }
    traj.error_estimate = std::max(accumulated, opts.abs_tol);
    return traj;
}

inline TimeDependentDrive constant_drive(Complex rabi, double detuning) {
    return {[rabi](double) { return rabi; }, detuning};
}

} // namespace eitsim
