#pragma once

#include <Eigen/Dense>
#include <vector>

#include "symmarkov/measure.hpp"
#include "symmarkov/rng.hpp"

namespace testnet {

using symmarkov::FiniteSymmetricMeasure;
using symmarkov::Triplet;

inline FiniteSymmetricMeasure path_graph(int n, const std::vector<double>& weights = {}) {
    std::vector<Triplet> edges;
    for (int i = 0; i + 1 < n; ++i)
        edges.push_back({i, i + 1, weights.empty() ? 1.0 : weights[static_cast<std::size_t>(i)]});
    return FiniteSymmetricMeasure::build(std::vector<double>(static_cast<std::size_t>(n), 1.0), edges);
}

inline FiniteSymmetricMeasure cycle_graph(int n) {
    std::vector<Triplet> edges;
    for (int i = 0; i < n; ++i) edges.push_back({i, (i + 1) % n, 1.0});
    if (n == 2) edges.pop_back();  // avoid the duplicate pair (0,1),(1,0)
    return FiniteSymmetricMeasure::build(std::vector<double>(static_cast<std::size_t>(n), 1.0), edges);
}

inline FiniteSymmetricMeasure complete_graph(int n) {
    std::vector<Triplet> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({i, j, 1.0});
    return FiniteSymmetricMeasure::build(std::vector<double>(static_cast<std::size_t>(n), 1.0), edges);
}

/// Star with the hub at state 0 and `leaves` spokes.
inline FiniteSymmetricMeasure star_graph(int leaves) {
    std::vector<Triplet> edges;
    for (int l = 1; l <= leaves; ++l) edges.push_back({0, l, 1.0});
    return FiniteSymmetricMeasure::build(std::vector<double>(static_cast<std::size_t>(leaves) + 1, 1.0),
                                         edges);
}

/// Birth-death chain on {0..n-1} with W(i, i+1) = 2^i.
inline FiniteSymmetricMeasure dyadic_birth_death(int n) {
    std::vector<double> weights;
    for (int i = 0; i + 1 < n; ++i) weights.push_back(std::pow(2.0, i));
    return path_graph(n, weights);
}

/// Two complete blocks {0,1} and {2,3} with no crossing edges.
inline FiniteSymmetricMeasure block_diagonal_graph() {
    return FiniteSymmetricMeasure::build({1, 1, 1, 1}, {{0, 1, 1.0}, {2, 3, 1.0}});
}

/// Seeded random connected network: random spanning tree plus extra edges,
/// weights in [0.5, 2], base measure in [0.5, 2].
inline FiniteSymmetricMeasure random_connected(std::uint64_t seed, int n,
                                               double extra_edge_prob = 0.25) {
    symmarkov::rng::Stream rng(seed, 0x7e57);
    std::vector<Triplet> edges;
    std::vector<char> present(static_cast<std::size_t>(n) * n, 0);
    auto add = [&](int i, int j, double w) {
        if (present[static_cast<std::size_t>(i) * n + j]) return;
        present[static_cast<std::size_t>(i) * n + j] = 1;
        present[static_cast<std::size_t>(j) * n + i] = 1;
        edges.push_back({i, j, w});
    };
    for (int v = 1; v < n; ++v)
        add(static_cast<int>(rng.next_below(static_cast<std::uint64_t>(v))), v,
            rng.next_range(0.5, 2.0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.next_uniform() < extra_edge_prob) add(i, j, rng.next_range(0.5, 2.0));
    std::vector<double> mu;
    for (int i = 0; i < n; ++i) mu.push_back(rng.next_range(0.5, 2.0));
    return FiniteSymmetricMeasure::build(std::move(mu), edges);
}

/// Seeded random vector with entries in [-1, 1].
inline Eigen::VectorXd random_function(std::uint64_t seed, int n) {
    symmarkov::rng::Stream rng(seed, 0xf);
    Eigen::VectorXd f(n);
    for (int i = 0; i < n; ++i) f[i] = rng.next_range(-1.0, 1.0);
    return f;
}

/// Seeded random nonempty proper subset.
inline symmarkov::StateSet random_subset(std::uint64_t seed, int n) {
    symmarkov::rng::Stream rng(seed, 0x5);
    symmarkov::StateSet s;
    for (int trial = 0; trial < 64 && (s.empty() || static_cast<int>(s.size()) == n); ++trial) {
        s.clear();
        for (int i = 0; i < n; ++i)
            if (rng.next_uniform() < 0.5) s.push_back(i);
    }
    if (s.empty()) s.push_back(0);
    if (static_cast<int>(s.size()) == n) s.pop_back();
    return s;
}

}  // namespace testnet
