#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "eitsim/errors.hpp"
#include "eitsim/motion.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

enum class FitModelKind {
    GeneralizedLorentzian,
    Lorentzian,
    Cusp,
    Gaussian,
    PseudoVoigt,
};

// Parameter layouts (all widths/centers in the units of the fitted axis):
//   GeneralizedLorentzian: [A, B, C, gamma, center]
//       y = gamma (A gamma + B (x - center)) / (gamma^2 + (x-center)^2 + C)
//   Lorentzian:  [A, gamma(HWHM), center, offset]
//   Gaussian:    [A, sigma, center, offset]
//   Cusp:        [A, s(inverse 1/e half-width), center, offset]
//   PseudoVoigt: [A(peak), fwhm, center, eta, offset]
struct FitModel {
    FitModelKind kind = FitModelKind::Lorentzian;
    std::vector<double> params;

    static std::size_t param_count(FitModelKind k) {
        switch (k) {
            case FitModelKind::GeneralizedLorentzian: return 5;
            case FitModelKind::Lorentzian: return 4;
            case FitModelKind::Cusp: return 4;
            case FitModelKind::Gaussian: return 4;
            case FitModelKind::PseudoVoigt: return 5;
        }
        return 0;
    }

    void validate() const {
        if (params.size() != param_count(kind))
            throw ValidationError("FitModel: wrong parameter count");
        switch (kind) {
            case FitModelKind::GeneralizedLorentzian:
                if (!(params[3] > 0))
                    throw ValidationError("FitModel: gamma must be > 0");
                if (params[2] < 0)
                    throw ValidationError("FitModel: C must be >= 0");
                break;
            case FitModelKind::PseudoVoigt:
                if (params[3] < 0 || params[3] > 1)
                    throw ValidationError("FitModel: eta must lie in [0, 1]");
                break;
            default:
                break;
        }
    }
};

inline double eval_model(const FitModel& model, double x) {
    const std::vector<double>& p = model.params;
    switch (model.kind) {
        case FitModelKind::GeneralizedLorentzian: {
            const double d = x - p[4];
            return p[3] * (p[0] * p[3] + p[1] * d) /
                   (p[3] * p[3] + d * d + p[2]);
        }
        case FitModelKind::Lorentzian: {
            const double d = x - p[2];
            return p[3] + p[0] * p[1] * p[1] / (p[1] * p[1] + d * d);
        }
        case FitModelKind::Gaussian: {
            const double d = x - p[2];
            return p[3] + p[0] * std::exp(-d * d / (2.0 * p[1] * p[1]));
        }
        case FitModelKind::Cusp:
            return p[3] + p[0] * std::exp(-std::abs(x - p[2]) * p[1]);
        case FitModelKind::PseudoVoigt: {
            PseudoVoigtParams pv{p[1], p[3]};
            return p[4] +
                   p[0] * pseudo_voigt_eval(pv, x - p[2]) /
                       pseudo_voigt_eval(pv, 0.0);
        }
    }
    return 0.0;
}

struct FitResult {
    FitModel model;
    double rms_residual = 0.0;
    double fwhm = 0.0;    // numeric, from half-extremum bracketing
    double center = 0.0;
    double contrast = 0.0; // |peak - baseline| / max(|peak|, |baseline|, eps)
    bool converged = false;
    int iterations = 0;
};

namespace detail {

// Peak location, amplitude against an edge baseline, and half-max full width
// estimated directly from the samples; used for initialization.
struct MomentEstimate {
    double center = 0.0;
    double amplitude = 0.0;
    double baseline = 0.0;
    double fwhm = 0.0;
};

inline MomentEstimate moments(const std::vector<double>& x,
                              const std::vector<double>& y) {
    const std::size_t n = y.size();
    const double baseline = 0.5 * (y.front() + y.back());
    std::size_t idx = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dev = std::abs(y[i] - baseline);
        if (dev > best) {
            best = dev;
            idx = i;
        }
    }
    MomentEstimate m;
    m.center = x[idx];
    m.baseline = baseline;
    m.amplitude = y[idx] - baseline;
    if (m.amplitude == 0.0)
        throw ValidationError("fit: degenerate (constant) data");
    const double half = baseline + 0.5 * m.amplitude;
    double lo = x.front(), hi = x.back();
    for (std::size_t i = idx; i-- > 0;) {
        const bool crossed = (m.amplitude > 0) ? y[i] < half : y[i] > half;
        if (crossed) {
            lo = x[i];
            break;
        }
    }
    for (std::size_t i = idx + 1; i < n; ++i) {
        const bool crossed = (m.amplitude > 0) ? y[i] < half : y[i] > half;
        if (crossed) {
            hi = x[i];
            break;
        }
    }
    m.fwhm = std::max(hi - lo, (x[1] - x[0]));
    return m;
}

inline std::vector<double> initial_params(FitModelKind kind,
                                          const MomentEstimate& m) {
    switch (kind) {
        case FitModelKind::GeneralizedLorentzian:
            return {m.amplitude + m.baseline, 0.0, 0.0, m.fwhm / 2.0, m.center};
        case FitModelKind::Lorentzian:
            return {m.amplitude, m.fwhm / 2.0, m.center, m.baseline};
        case FitModelKind::Gaussian:
            return {m.amplitude, m.fwhm / (2.0 * std::sqrt(2.0 * std::log(2.0))),
                    m.center, m.baseline};
        case FitModelKind::Cusp:
            return {m.amplitude, 2.0 * std::log(2.0) / m.fwhm, m.center,
                    m.baseline};
        case FitModelKind::PseudoVoigt:
            return {m.amplitude, m.fwhm, m.center, 0.5, m.baseline};
    }
    return {};
}

// Keep parameters inside the model's hard domain during iteration.
inline void clamp_params(FitModelKind kind, std::vector<double>& p) {
    switch (kind) {
        case FitModelKind::GeneralizedLorentzian:
            p[3] = std::max(std::abs(p[3]), 1e-300);
            p[2] = std::max(p[2], 0.0);
            break;
        case FitModelKind::Lorentzian:
        case FitModelKind::Gaussian:
        case FitModelKind::Cusp:
            p[1] = std::max(std::abs(p[1]), 1e-300);
            break;
        case FitModelKind::PseudoVoigt:
            p[1] = std::max(std::abs(p[1]), 1e-300);
            p[3] = std::clamp(p[3], 0.0, 1.0);
            break;
    }
}

} // namespace detail

// Damped least-squares (Levenberg-Marquardt) fit of y(x) to the chosen model.
// Numeric central-difference Jacobian; accepted steps never increase the
// residual. Converged when the gradient norm drops below 1e-8 of scale.
inline FitResult fit(const std::vector<double>& x, const std::vector<double>& y,
                     FitModelKind kind,
                     const std::vector<double>& init = {}) {
    const std::size_t np = FitModel::param_count(kind);
    if (x.size() != y.size())
        throw ValidationError("fit: x and y sizes differ");
    if (x.size() < 5 * np)
        throw ValidationError("fit: need >= 5 points per parameter");

    const detail::MomentEstimate m = detail::moments(x, y);
    std::vector<double> p = init.empty() ? detail::initial_params(kind, m)
                                         : init;
    if (p.size() != np) throw ValidationError("fit: wrong init size");
    detail::clamp_params(kind, p);

    const std::size_t n = x.size();
    const auto residuals = [&](const std::vector<double>& params,
                               Eigen::VectorXd& r) {
        FitModel mdl{kind, params};
        for (std::size_t i = 0; i < n; ++i)
            r[long(i)] = eval_model(mdl, x[i]) - y[i];
    };

    Eigen::VectorXd r(n), r_try(n);
    Eigen::MatrixXd J(n, np);
    residuals(p, r);
    double cost = r.squaredNorm();
    const double y_scale = std::max(std::abs(m.amplitude), 1e-300);
    const double grad_tol = 1e-8 * y_scale * y_scale;

    double lambda = 1e-3;
    FitResult out;
    int it = 0;
    bool converged = false;
    for (; it < 500; ++it) {
        // Central-difference Jacobian.
        for (std::size_t j = 0; j < np; ++j) {
            const double h =
                1e-6 * std::max(std::abs(p[j]), 1e-8 * y_scale) + 1e-300;
            std::vector<double> pp = p, pm = p;
            pp[j] += h;
            pm[j] -= h;
            Eigen::VectorXd rp(n), rm(n);
            residuals(pp, rp);
            residuals(pm, rm);
            J.col(long(j)) = (rp - rm) / (2.0 * h);
        }
        const Eigen::VectorXd g = J.transpose() * r;
        if (g.norm() < grad_tol) {
            converged = true;
            break;
        }
        const Eigen::MatrixXd JtJ = J.transpose() * J;

        bool accepted = false;
        for (int tries = 0; tries < 30; ++tries) {
            Eigen::MatrixXd A = JtJ;
            for (std::size_t j = 0; j < np; ++j)
                A(long(j), long(j)) += lambda * std::max(JtJ(long(j), long(j)),
                                                         1e-300);
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            std::vector<double> p_try = p;
            for (std::size_t j = 0; j < np; ++j) p_try[j] += step[long(j)];
            detail::clamp_params(kind, p_try);
            residuals(p_try, r_try);
            const double cost_try = r_try.squaredNorm();
            if (cost_try <= cost) {
                p = p_try;
                r = r_try;
                // Converged when an accepted step no longer moves the cost.
                if (cost - cost_try <= 1e-12 * (cost + 1e-300)) converged = true;
                cost = cost_try;
                lambda = std::max(lambda * 0.3, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (converged) break;
        if (!accepted) break; // stuck; report best-so-far
    }

    out.model = FitModel{kind, p};
    out.model.validate();
    out.iterations = it;
    out.converged = converged;
    out.rms_residual = std::sqrt(cost / double(n));

    // Numeric FWHM: locate the extremum of the fitted model, then bisect the
    // half-extremum crossings against the wing baseline.
    const auto f = [&](double xx) { return eval_model(out.model, xx); };
    const double span = x.back() - x.front();
    double cx = x.front();
    double cbest = 0.0;
    const double far_left = f(x.front() - 10.0 * span);
    for (int i = 0; i <= 4000; ++i) {
        const double xx = x.front() + span * double(i) / 4000.0;
        const double dev = std::abs(f(xx) - far_left);
        if (dev > cbest) {
            cbest = dev;
            cx = xx;
        }
    }
    out.center = cx;
    const double peak = f(cx);
    const double half = far_left + 0.5 * (peak - far_left);
    const auto bisect = [&](double a, double b) {
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (a + b);
            const bool inner = (peak > far_left) ? f(mid) > half : f(mid) < half;
            (inner ? a : b) = mid;
        }
        return 0.5 * (a + b);
    };
    const double reach = 10.0 * span + std::abs(cx - x.front());
    out.fwhm = bisect(cx, cx + reach) - bisect(cx, cx - reach);
    out.contrast = std::abs(peak - far_left) /
                   std::max({std::abs(peak), std::abs(far_left), 1e-300});
    return out;
}

// Fit the imaginary part of a sampled susceptibility.
inline FitResult fit(const Spectrum& data, FitModelKind kind,
                     const std::vector<double>& init = {}) {
    std::vector<double> y(data.chi.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = data.chi[i].imag();
    return fit(data.delta, y, kind, init);
}

struct QuadraticWidthLaw {
    double offset = 0.0;    // rad/s
    double curvature = 0.0; // rad/s per rad^2
    double offset_stderr = 0.0;
    double curvature_stderr = 0.0;
    double rms_residual = 0.0;
};

// Least-squares fit width(theta) = offset + curvature * theta^2.
inline QuadraticWidthLaw quadratic_width_law(const std::vector<double>& angles,
                                             const std::vector<double>& widths) {
    if (angles.size() != widths.size() || angles.size() < 3)
        throw ValidationError("quadratic_width_law: need >= 3 matched points");
    const long n = long(angles.size());
    Eigen::MatrixXd X(n, 2);
    Eigen::VectorXd w(n);
    for (long i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        X(i, 1) = angles[std::size_t(i)] * angles[std::size_t(i)];
        w[i] = widths[std::size_t(i)];
    }
    const Eigen::MatrixXd XtX = X.transpose() * X;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(XtX);
    if (!lu.isInvertible())
        throw SingularConfiguration(
            "quadratic_width_law: rank-deficient design (all angles equal?)");
    const Eigen::VectorXd beta = lu.solve(X.transpose() * w);
    const Eigen::VectorXd resid = w - X * beta;
    const double dof = double(n - 2);
    const double var = dof > 0 ? resid.squaredNorm() / dof : 0.0;
    const Eigen::MatrixXd cov = var * lu.inverse();
    QuadraticWidthLaw out;
    out.offset = beta[0];
    out.curvature = beta[1];
    out.offset_stderr = std::sqrt(std::max(cov(0, 0), 0.0));
    out.curvature_stderr = std::sqrt(std::max(cov(1, 1), 0.0));
    out.rms_residual = std::sqrt(resid.squaredNorm() / double(n));
    return out;
}

} // namespace eitsim
