#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"
#include "eitsim/gauss_hermite.hpp"
#include "eitsim/steady.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

enum class BroadeningMechanism {
    Doppler,
    ResidualDoppler,
    Dicke,
    TransitBallistic,
    TransitDiffusive,
    Collisional,
};

enum class LineshapeFamily { Gaussian, Lorentzian, Cusp, Voigt };

struct BroadeningReport {
    BroadeningMechanism mechanism;
    double width = 0.0; // rad/s
    LineshapeFamily lineshape_family = LineshapeFamily::Lorentzian;
};

// One-photon Doppler width sigma_Dop = v_th |k| (rms of the shifted line).
inline double sigma_doppler(double v_th, double k) {
    if (k < 0) throw ValidationError("sigma_doppler: k must be >= 0");
    return v_th * k;
}

// 1-D Maxwell-Boltzmann density, rms velocity v_th.
inline double maxwell_weight(double v, double v_th) {
    if (!(v_th > 0)) throw ValidationError("maxwell_weight: v_th must be > 0");
    return std::exp(-v * v / (2.0 * v_th * v_th)) /
           (std::sqrt(constants::two_pi) * v_th);
}

// Residual (two-photon) Doppler width for a small angle theta between the
// beams: k v_th theta.
inline double residual_doppler_width(double k, double v_th, double theta) {
    if (theta < 0) throw ValidationError("residual_doppler_width: theta >= 0");
    return sigma_doppler(v_th, k) * theta;
}

// Dicke-narrowed two-photon linewidth (Lorentzian HWHM) D k_eff^2.
inline double dicke_width(double diffusion, double k_eff) {
    if (diffusion < 0) throw ValidationError("dicke_width: diffusion >= 0");
    return diffusion * k_eff * k_eff;
}

// Transit-time broadening through a waist w0: ballistic v_th/w0 against
// diffusive D/w0^2, the smaller one prevails.
inline BroadeningReport transit_width(const MotionEnvironment& env, double w0) {
    if (!(w0 > 0)) throw ValidationError("transit_width: w0 must be > 0");
    const double ballistic = env.v_th / w0;
    if (env.diffusion == 0.0)
        return {BroadeningMechanism::TransitBallistic, ballistic,
                LineshapeFamily::Cusp};
    const double diffusive = env.diffusion / (w0 * w0);
    if (diffusive < ballistic)
        return {BroadeningMechanism::TransitDiffusive, diffusive,
                LineshapeFamily::Lorentzian};
    return {BroadeningMechanism::TransitBallistic, ballistic,
            LineshapeFamily::Cusp};
}

// Cusp weight exp(-|delta| w0 / v_th); full width at 1/e is 2 v_th/w0,
// FWHM is 2 (v_th/w0) ln 2.
inline double cusp_lineshape(double delta, double w0, double v_th) {
    if (!(v_th > 0)) throw ValidationError("cusp_lineshape: v_th must be > 0");
    return std::exp(-std::abs(delta) * w0 / v_th);
}

// Doppler-limited EIT half-width, Omega_c^2/sigma_Dop + gamma12.
inline double eit_width_doppler(Complex omega_c, double sigma_dop,
                                double gamma12) {
    if (!(sigma_dop > 0))
        throw DomainError("eit_width_doppler: sigma_Dop must be > 0");
    return std::norm(omega_c) / sigma_dop + gamma12;
}

struct CollisionalEitWidth {
    double width = 0.0; // rad/s
    // Set when the intended regime gamma13 + gamma13_col >> sigma_Dop does
    // not hold; the formula is then only a crude approximation.
    bool crude = false;
};

// EIT linewidth with homogeneous collisional broadening folded in:
//   Omega_c^2/(gamma13 + gamma13_col + sigma_Dop) + gamma12 + gamma12_col.
inline CollisionalEitWidth eit_width_collisional(const AtomicSystem& sys,
                                                 const MotionEnvironment& env,
                                                 Complex omega_c,
                                                 double sigma_dop) {
    const double optical = sys.gamma13 + env.gamma13_col + sigma_dop;
    if (optical == 0.0)
        throw DomainError("eit_width_collisional: zero optical width");
    CollisionalEitWidth out;
    out.width = std::norm(omega_c) / optical + sys.gamma12 + env.gamma12_col;
    out.crude = !(sys.gamma13 + env.gamma13_col > 3.0 * sigma_dop);
    return out;
}

struct DopplerOptions {
    int nodes = 64;        // starting Gauss-Hermite order
    int max_nodes = 1024;  // node-doubling ceiling
    double rel_tol = 1e-4; // node-doubling convergence target
    // When Gauss-Hermite cannot resolve sub-thermal spectral structure
    // (sigma_Dop >> gamma13), fall back to a dense trapezoid rule over
    // +-8 v_th that resolves the narrowest Lorentzian feature.
    bool allow_fallback = true;
    std::size_t max_fallback_points = 4'000'000;
};

namespace detail {

// Base one-photon detuning as a function of the scanned two-photon detuning.
// Lambda: delta = Delta1 - Delta2; ladder: delta = Delta1 + Delta2.
inline double delta1_of(SchemeKind scheme, double control_detuning,
                        double delta) {
    return scheme == SchemeKind::Lambda ? control_detuning + delta
                                        : delta - control_detuning;
}

inline Complex chi_shifted(const AtomicSystem& sys, const FieldDrive& control,
                           double delta, double v, double k_probe,
                           double k_eff) {
    const double d1 = delta1_of(sys.scheme, control.detuning, delta) -
                      k_probe * v;
    return chi_weak_probe(sys, control, d1, delta - k_eff * v).value;
}

} // namespace detail

// Thermal average of the weak-probe susceptibility over the 1-D velocity
// distribution. Both the one-photon and two-photon detunings are shifted by
// the same velocity draw. Gauss-Hermite quadrature with node doubling;
// spectra that Gauss-Hermite cannot resolve fall back to a dense trapezoid
// rule (see DopplerOptions).
inline Spectrum doppler_average(const AtomicSystem& sys,
                                const FieldDrive& control,
                                const DetuningGrid& grid, double k_probe,
                                double k_eff, double v_th,
                                const DopplerOptions& opts = {}) {
    if (!(v_th > 0)) throw ValidationError("doppler_average: v_th must be > 0");
    grid.validate();

    Spectrum out;
    out.delta = grid.values();
    const std::size_t n_pts = out.delta.size();
    out.chi.resize(n_pts);

    if (k_probe == 0.0 && k_eff == 0.0) {
        for (std::size_t i = 0; i < n_pts; ++i)
            out.chi[i] =
                detail::chi_shifted(sys, control, out.delta[i], 0.0, 0.0, 0.0);
        return out;
    }

    const auto evaluate_gh = [&](int n, std::vector<Complex>& dst) {
        const QuadratureRule& rule = gauss_hermite(n);
        const double norm = 1.0 / std::sqrt(constants::pi);
        for (std::size_t i = 0; i < n_pts; ++i) {
            Complex acc(0.0, 0.0);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double v = std::sqrt(2.0) * v_th * rule.nodes[q];
                acc += rule.weights[q] * detail::chi_shifted(sys, control,
                                                             out.delta[i], v,
                                                             k_probe, k_eff);
            }
            dst[i] = norm * acc;
        }
    };

    const auto max_abs = [](const std::vector<Complex>& v) {
        double m = 0.0;
        for (const Complex& c : v) m = std::max(m, std::abs(c));
        return m;
    };
    const auto max_diff = [](const std::vector<Complex>& a,
                             const std::vector<Complex>& b) {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i)
            m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };

    std::vector<Complex> prev(n_pts), cur(n_pts);
    int n = std::max(2, opts.nodes);
    evaluate_gh(n, prev);
    bool converged = false;
    while (n < opts.max_nodes) {
        n *= 2;
        evaluate_gh(n, cur);
        const double scale = std::max(max_abs(cur), 1e-300);
        const bool ok = max_diff(prev, cur) <= opts.rel_tol * scale;
        prev.swap(cur);
        if (ok) {
            converged = true;
            break;
        }
    }
    if (converged) {
        out.chi = prev;
        return out;
    }

    if (!opts.allow_fallback) {
        out.chi = prev;
        out.warnings.push_back(
            "doppler_average: Gauss-Hermite quadrature did not converge at " +
            std::to_string(opts.max_nodes) + " nodes");
        return out;
    }

    // Narrowest velocity-space features: the optical Lorentzian gamma13/k_p
    // and the power-broadened two-photon line gammaEIT/k_eff.
    double feature = std::numeric_limits<double>::infinity();
    if (k_probe > 0) feature = std::min(feature, sys.gamma13 / k_probe);
    if (k_eff > 0) {
        const double ge =
            sys.gamma12 + std::norm(control.rabi) / std::max(sys.gamma13, 1e-300);
        if (ge > 0) feature = std::min(feature, ge / k_eff);
    }
    const double span = 16.0 * v_th;
    std::size_t pts =
        std::isfinite(feature)
            ? std::size_t(std::ceil(span / (feature / 8.0))) + 1
            : 2001;
    pts = std::clamp<std::size_t>(pts, 2001, opts.max_fallback_points);

    const auto evaluate_trap = [&](std::size_t m, std::vector<Complex>& dst) {
        const double h = span / double(m - 1);
        for (std::size_t i = 0; i < n_pts; ++i) {
            Complex acc(0.0, 0.0);
            for (std::size_t q = 0; q < m; ++q) {
                const double v = -8.0 * v_th + h * double(q);
                const double w = maxwell_weight(v, v_th) *
                                 ((q == 0 || q == m - 1) ? 0.5 : 1.0);
                acc += w * detail::chi_shifted(sys, control, out.delta[i], v,
                                               k_probe, k_eff);
            }
            dst[i] = acc * h;
        }
    };

    evaluate_trap(pts, prev);
    evaluate_trap(2 * pts - 1, cur);
    const double scale = std::max(max_abs(cur), 1e-300);
    if (max_diff(prev, cur) > opts.rel_tol * scale)
        out.warnings.push_back(
            "doppler_average: velocity quadrature not converged to " +
            std::to_string(opts.rel_tol) + " relative; result is approximate");
    out.chi = cur;
    return out;
}

// EIT spectrum in the Dicke (diffusive) regime: the two-photon decoherence is
// replaced by gamma12 + D k_eff^2 inside the weak-probe susceptibility.
// Passing v_th > 0 enables the regime check D k_eff < v_th.
inline Spectrum dicke_eit_spectrum(const AtomicSystem& sys,
                                   const FieldDrive& control,
                                   const DetuningGrid& grid, double k_eff,
                                   double diffusion, double v_th = 0.0) {
    grid.validate();
    AtomicSystem mod = sys;
    mod.gamma12 += dicke_width(diffusion, k_eff);

    Spectrum out;
    out.delta = grid.values();
    out.chi.resize(out.delta.size());
    for (std::size_t i = 0; i < out.delta.size(); ++i) {
        const double d1 =
            detail::delta1_of(sys.scheme, control.detuning, out.delta[i]);
        out.chi[i] = chi_weak_probe(mod, control, d1, out.delta[i]).value;
    }
    if (v_th > 0 && k_eff > 0 && !(diffusion * k_eff < v_th))
        out.warnings.push_back(
            "dicke_eit_spectrum: diffusion regime invalid (D k_eff >= v_th); "
            "ballistic treatment applies");
    return out;
}

struct PseudoVoigtParams {
    double fwhm = 0.0; // matched total width
    double eta = 0.0;  // Lorentzian mixing fraction in [0, 1]
};

// Width-matched pseudo-Voigt mixing (Thompson-Cox-Hastings form).
inline PseudoVoigtParams pseudo_voigt_params(double fwhm_gauss,
                                             double fwhm_lorentz) {
    const double fg = fwhm_gauss, fl = fwhm_lorentz;
    const double f = std::pow(
        std::pow(fg, 5) + 2.69269 * std::pow(fg, 4) * fl +
            2.42843 * std::pow(fg, 3) * fl * fl +
            4.47163 * fg * fg * std::pow(fl, 3) +
            0.07842 * fg * std::pow(fl, 4) + std::pow(fl, 5),
        0.2);
    const double r = fl / f;
    PseudoVoigtParams out;
    out.fwhm = f;
    out.eta = std::clamp(1.36603 * r - 0.47719 * r * r + 0.11116 * r * r * r,
                         0.0, 1.0);
    return out;
}

// Area-normalized pseudo-Voigt profile.
inline double pseudo_voigt_eval(const PseudoVoigtParams& pv, double x) {
    const double sigma = pv.fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0)));
    const double gamma = pv.fwhm / 2.0;
    const double gauss = std::exp(-x * x / (2.0 * sigma * sigma)) /
                         (sigma * std::sqrt(constants::two_pi));
    const double lorentz =
        gamma / constants::pi / (x * x + gamma * gamma);
    return pv.eta * lorentz + (1.0 - pv.eta) * gauss;
}

// Numeric convolution of the transit cusp weight with a Lorentzian of HWHM
// gamma_lorentz, evaluated on the given symmetric grid. Trapezoid rule; the
// grid must resolve the narrower of the two widths by >= 10 points.
inline std::vector<double> cusp_convolved_lorentzian(
    const std::vector<double>& delta, double w0, double v_th,
    double gamma_lorentz) {
    if (delta.size() < 3)
        throw ValidationError("cusp_convolved_lorentzian: grid too small");
    const double h = delta[1] - delta[0];
    const double narrow = std::min(v_th / w0, gamma_lorentz);
    if (h > narrow / 10.0)
        throw ResolutionError(
            "cusp_convolved_lorentzian: grid step does not resolve the "
            "narrower width by >= 10 points");
    const std::size_t n = delta.size();
    std::vector<double> cusp(n), lor(n), out(n, 0.0);
    const double mid = 0.5 * (delta.front() + delta.back());
    for (std::size_t i = 0; i < n; ++i) {
        cusp[i] = cusp_lineshape(delta[i] - mid, w0, v_th);
        const double x = delta[i] - mid;
        lor[i] = gamma_lorentz / constants::pi /
                 (x * x + gamma_lorentz * gamma_lorentz);
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const long k = long(i) - (long(j) - long(n / 2));
            if (k < 0 || k >= long(n)) continue;
            acc += cusp[j] * lor[std::size_t(k)];
        }
        out[i] = acc * h;
    }
    return out;
}

} // namespace eitsim
