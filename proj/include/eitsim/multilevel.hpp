#pragma once

#include <string>
#include <vector>

#include "eitsim/errors.hpp"
#include "eitsim/types.hpp"

namespace eitsim {

// One control coupling in the nested-resonance chain/tree. gamma is the
// decoherence rate of the coherence between the initial ground state and the
// state reached by this coupling; delta is the cumulative multi-photon
// detuning at that state.
struct CouplingNode {
    Complex rabi{0.0, 0.0}; // rad/s
    double gamma = 0.0;     // rad/s
    double delta = 0.0;     // rad/s
    std::vector<CouplingNode> children;
};

// Probe transition heading the tree: chi = alpha0 gamma / (gamma - i Delta + S)
// where S sums the child contributions |Omega_j|^2 / (gamma_j - i delta_j + S_j).
struct ProbeRoot {
    double alpha0 = 0.0; // per-length normalization of the probe line
    double gamma = 0.0;  // rad/s
    double delta = 0.0;  // rad/s
    std::vector<CouplingNode> children;
};

namespace detail {

inline std::string node_path_string(const std::vector<std::size_t>& path) {
    std::string s = "root";
    for (std::size_t i : path) s += ".children[" + std::to_string(i) + "]";
    return s;
}

inline Complex node_contribution(const CouplingNode& node,
                                 std::vector<std::size_t>& path) {
    if (node.gamma < 0)
        throw ValidationError("chi_nested: negative gamma at " +
                              node_path_string(path));
    Complex denom(node.gamma, -node.delta);
    for (std::size_t i = 0; i < node.children.size(); ++i) {
        path.push_back(i);
        denom += node_contribution(node.children[i], path);
        path.pop_back();
    }
    if (denom == Complex(0.0, 0.0))
        throw SingularConfiguration("chi_nested: zero denominator at " +
                                    node_path_string(path));
    return std::norm(node.rabi) / denom;
}

} // namespace detail

// Depth-first evaluation of the nested multi-level susceptibility.
inline Complex chi_nested(const ProbeRoot& root) {
    std::vector<std::size_t> path;
    Complex denom(root.gamma, -root.delta);
    for (std::size_t i = 0; i < root.children.size(); ++i) {
        path.push_back(i);
        denom += detail::node_contribution(root.children[i], path);
        path.pop_back();
    }
    if (denom == Complex(0.0, 0.0))
        throw SingularConfiguration("chi_nested: zero denominator at root");
    return root.alpha0 * root.gamma / denom;
}

// How the scanned grid detuning enters the tree: each entry adds
// coefficient * delta_grid to the delta of the node addressed by path
// (empty path = the probe root).
struct DetuningMapEntry {
    std::vector<std::size_t> path;
    double coefficient = 1.0;
};

inline Spectrum spectrum_nested(const ProbeRoot& tmpl, const DetuningGrid& grid,
                                const std::vector<DetuningMapEntry>& map) {
    grid.validate();
    // Validate every addressed path up front.
    for (const DetuningMapEntry& e : map) {
        const std::vector<CouplingNode>* level = &tmpl.children;
        for (std::size_t depth = 0; depth < e.path.size(); ++depth) {
            if (e.path[depth] >= level->size())
                throw ValidationError(
                    "spectrum_nested: detuning map addresses nonexistent "
                    "node " +
                    detail::node_path_string(std::vector<std::size_t>(
                        e.path.begin(), e.path.begin() + long(depth) + 1)));
            level = &(*level)[e.path[depth]].children;
        }
    }

    Spectrum out;
    out.delta = grid.values();
    out.chi.reserve(out.delta.size());
    for (double d : out.delta) {
        ProbeRoot root = tmpl;
        for (const DetuningMapEntry& e : map) {
            if (e.path.empty()) {
                root.delta += e.coefficient * d;
                continue;
            }
            CouplingNode* node = &root.children[e.path[0]];
            for (std::size_t depth = 1; depth < e.path.size(); ++depth)
                node = &node->children[e.path[depth]];
            node->delta += e.coefficient * d;
        }
        out.chi.push_back(chi_nested(root));
    }
    return out;
}

} // namespace eitsim
