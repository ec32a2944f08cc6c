#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <mutex>
#include <vector>

#include "eitsim/constants.hpp"
#include "eitsim/errors.hpp"

namespace eitsim {

struct QuadratureRule {
    std::vector<double> nodes;   // abscissas x_i for weight e^{-x^2}
    std::vector<double> weights; // sum(weights) = sqrt(pi)
};

namespace detail {

// Golub-Welsch nodes (eigenvalues of the Jacobi matrix, computed without
// eigenvectors) and weights from the orthonormal-polynomial identity
// w_i = mu0 / sum_k p_k(x_i)^2, stable for large n.
inline QuadratureRule compute_gauss_hermite(int n) {
    if (n < 1) throw ValidationError("gauss_hermite: n must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(k / 2.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double mu0 = std::sqrt(constants::pi);
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()[i];
        rule.nodes[i] = x;
        // Orthonormal Hermite recurrence: p_{k+1} = (x p_k - b_k p_{k-1})/b_{k+1}.
        double pkm1 = 0.0;
        double pk = 1.0 / std::sqrt(mu0); // p_0, normalized against e^{-x^2}
        double sum = pk * pk;
        for (int k = 0; k < n - 1; ++k) {
            const double bk = std::sqrt(k / 2.0);
            const double bk1 = std::sqrt((k + 1) / 2.0);
            const double pk1 = (x * pk - bk * pkm1) / bk1;
            pkm1 = pk;
            pk = pk1;
            sum += pk * pk;
            // Extreme nodes overflow the unweighted recurrence; their true
            // weights underflow double precision anyway.
            if (!std::isfinite(sum)) break;
        }
        rule.weights[i] = std::isfinite(sum) ? 1.0 / sum : 0.0;
    }
    return rule;
}

} // namespace detail

// Cached Gauss-Hermite rule for weight e^{-x^2} on (-inf, inf).
inline const QuadratureRule& gauss_hermite(int n) {
    static std::map<int, QuadratureRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, detail::compute_gauss_hermite(n)).first;
    return it->second;
}

} // namespace eitsim
