#include "symmarkov/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace symmarkov::dyadic {

namespace {

FiniteSymmetricMeasure measure_from_weights(int level, const Eigen::MatrixXd& W) {
    int n = W.rows();
    std::vector<Triplet> entries;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (W(i, j) > 0.0) entries.push_back({i, j, W(i, j)});
    std::vector<double> mu(static_cast<std::size_t>(n), std::ldexp(1.0, -level));
    return FiniteSymmetricMeasure::build(std::move(mu), entries, /*allow_diagonal=*/true);
}

}  // namespace

DiscretizationLadder::DiscretizationLadder(const kernels::KernelSpec& spec, int finest,
                                           int max_level) {
    if (finest < 0) throw Error("finest level must be >= 0");
    if (finest > max_level)
        throw LevelTooLargeError("level " + std::to_string(finest) + " exceeds the configured max " +
                                 std::to_string(max_level));
    DyadicPartition fine(finest);
    const int cells = fine.cells();

    // Finest weights by tensor quadrature per cell pair; only the upper
    // triangle is computed so symmetry is exact as stored.
    Eigen::MatrixXd W(cells, cells);
    std::vector<double> xs, wx, ys, wy;
    for (int i = 0; i < cells; ++i) {
        kernels::Interval ci = fine.cell(i);
        kernels::rule_nodes(spec.quadrature(), ci.lo, ci.hi, xs, wx);
        for (int j = i; j < cells; ++j) {
            kernels::Interval cj = fine.cell(j);
            kernels::rule_nodes(spec.quadrature(), cj.lo, cj.hi, ys, wy);
            double mass = 0.0;
            for (std::size_t a = 0; a < xs.size(); ++a) {
                double row = 0.0;
                for (std::size_t b = 0; b < ys.size(); ++b) row += wy[b] * spec(xs[a], ys[b]);
                mass += wx[a] * row;
            }
            W(i, j) = mass;
            W(j, i) = mass;
        }
    }

    weights_.assign(static_cast<std::size_t>(finest) + 1, {});
    weights_[static_cast<std::size_t>(finest)] = std::move(W);
    // Aggregate level by level: each coarse entry is the fixed-order sum of
    // its four children, mirrored from the upper triangle.
    for (int level = finest - 1; level >= 0; --level) {
        const Eigen::MatrixXd& child = weights_[static_cast<std::size_t>(level) + 1];
        int m = 1 << level;
        Eigen::MatrixXd coarse(m, m);
        for (int i = 0; i < m; ++i)
            for (int k = i; k < m; ++k) {
                double sum = child(2 * i, 2 * k) + child(2 * i, 2 * k + 1) +
                             child(2 * i + 1, 2 * k) + child(2 * i + 1, 2 * k + 1);
                coarse(i, k) = sum;
                coarse(k, i) = sum;
            }
        weights_[static_cast<std::size_t>(level)] = std::move(coarse);
    }
}

const Eigen::MatrixXd& DiscretizationLadder::weights(int level) const {
    if (level < 0 || level > finest())
        throw Error("level " + std::to_string(level) + " not present in the ladder");
    return weights_[static_cast<std::size_t>(level)];
}

DiscretizedNetwork DiscretizationLadder::network(int level) const {
    const Eigen::MatrixXd& W = weights(level);
    return {level, W, measure_from_weights(level, W)};
}

DiscretizedNetwork discretize_kernel(const kernels::KernelSpec& spec, int level, int max_level) {
    DiscretizationLadder ladder(spec, level, max_level);
    return ladder.network(level);
}

std::vector<double> conductance_sequence(const DiscretizationLadder& ladder, double x, double y,
                                         int levels) {
    if (levels < 1) throw Error("need at least one level");
    if (levels > ladder.finest()) throw Error("ladder too shallow for the requested levels");
    if (x == y) throw Error("conductance sequence needs distinct points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(levels));
    for (int n = 1; n <= levels; ++n) {
        DyadicPartition part(n);
        double value = ladder.weights(n)(part.locate(x), part.locate(y));
        if (!out.empty() && value > out.back() + 1e-12 * (1.0 + out.back()))
            throw MonotonicityViolation(n, out.back(), value);
        out.push_back(value);
    }
    return out;
}

std::vector<double> conductance_sequence(const kernels::KernelSpec& spec, double x, double y,
                                         int levels, int max_level) {
    return conductance_sequence(DiscretizationLadder(spec, levels, max_level), x, y, levels);
}

std::vector<double> vertex_mass_sequence(const DiscretizationLadder& ladder, double x, int levels,
                                         bool normalized) {
    if (levels < 1) throw Error("need at least one level");
    if (levels > ladder.finest()) throw Error("ladder too shallow for the requested levels");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(levels));
    double previous_raw = 0.0;
    for (int n = 1; n <= levels; ++n) {
        DyadicPartition part(n);
        double raw = ladder.weights(n).row(part.locate(x)).sum();
        if (n > 1 && raw > previous_raw + 1e-12 * (1.0 + previous_raw))
            throw MonotonicityViolation(n, previous_raw, raw);
        previous_raw = raw;
        out.push_back(normalized ? raw / part.cell_measure() : raw);
    }
    return out;
}

std::vector<double> vertex_mass_sequence(const kernels::KernelSpec& spec, double x, int levels,
                                         bool normalized, int max_level) {
    return vertex_mass_sequence(DiscretizationLadder(spec, levels, max_level), x, levels,
                                normalized);
}

Connectivity::Connectivity(const DiscretizedNetwork& net, double edge_tolerance) {
    const int n = net.weights.rows();
    adjacency_.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && net.weights(i, j) > edge_tolerance) adjacency_[i].push_back(j);
    component_.assign(static_cast<std::size_t>(n), -1);
    component_count_ = 0;
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        if (component_[s] != -1) continue;
        int label = component_count_++;
        component_[s] = label;
        queue.push_back(s);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adjacency_[v])
                if (component_[w] == -1) {
                    component_[w] = label;
                    queue.push_back(w);
                }
        }
    }
}

StateSet Connectivity::first_component() const {
    StateSet out;
    for (int i = 0; i < static_cast<int>(component_.size()); ++i)
        if (component_[i] == 0) out.push_back(i);
    return out;
}

std::vector<int> Connectivity::path(int from, int to) const {
    const int n = static_cast<int>(component_.size());
    if (from < 0 || from >= n || to < 0 || to >= n) throw IndexError("cell index out of range");
    if (component_[from] != component_[to]) return {};
    std::vector<int> parent(static_cast<std::size_t>(n), -1);
    std::deque<int> queue{from};
    parent[from] = from;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (v == to) break;
        for (int w : adjacency_[v])
            if (parent[w] == -1) {
                parent[w] = v;
                queue.push_back(w);
            }
    }
    std::vector<int> path{to};
    while (path.back() != from) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

Connectivity check_connected(const DiscretizedNetwork& net, double edge_tolerance) {
    return Connectivity(net, edge_tolerance);
}

}  // namespace symmarkov::dyadic
