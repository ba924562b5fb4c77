#pragma once

#include <Eigen/Dense>
#include <vector>

#include "symmarkov/kernel.hpp"
#include "symmarkov/measure.hpp"

namespace symmarkov::dyadic {

inline constexpr int kDefaultMaxLevel = 12;

/// Dyadic partition of [0,1] at a given level: cells [i 2^-n, (i+1) 2^-n),
/// the last cell closed at 1.  Level n+1 splits every cell in two.
struct DyadicPartition {
    int level;

    explicit DyadicPartition(int n) : level(n) {
        if (n < 0) throw Error("partition level must be >= 0");
    }
    int cells() const { return 1 << level; }
    kernels::Interval cell(int i) const {
        double h = std::ldexp(1.0, -level);
        return {i * h, i + 1 == cells() ? 1.0 : (i + 1) * h};
    }
    /// i_n(x): index of the cell containing x.
    int locate(double x) const {
        if (x < 0.0 || x > 1.0) throw Error("point must lie in [0, 1]");
        int i = static_cast<int>(std::ldexp(x, level));
        return std::min(i, cells() - 1);
    }
    double cell_measure() const { return std::ldexp(1.0, -level); }
};

/// Weighted network of one refinement level: w_n(i,j) = rho(A_n(i) x A_n(j))
/// with mu_i the Lebesgue mass 2^-n of a cell.  Satisfies every finite
/// symmetric measure invariant, so the whole operator suite applies.
struct DiscretizedNetwork {
    int level;
    Eigen::MatrixXd weights;
    FiniteSymmetricMeasure measure;
};

/// The whole tower of levels 0..finest, with coarse weights aggregated
/// from the finest-level quadrature so that refinement bookkeeping is
/// exact: w_n(i,k) is the floating-point sum of its four children, which
/// makes the monotone sequences of the theory monotone in floating point
/// as well.
class DiscretizationLadder {
  public:
    DiscretizationLadder(const kernels::KernelSpec& spec, int finest,
                         int max_level = kDefaultMaxLevel);

    int finest() const { return static_cast<int>(weights_.size()) - 1; }
    const Eigen::MatrixXd& weights(int level) const;
    DiscretizedNetwork network(int level) const;

  private:
    std::vector<Eigen::MatrixXd> weights_;  // index = level
};

/// Single-level discretization (the level is its own finest).
DiscretizedNetwork discretize_kernel(const kernels::KernelSpec& spec, int level,
                                     int max_level = kDefaultMaxLevel);

/// c^(n)_{xy} for n = 1..levels; monotone nonincreasing, enforced with
/// tolerance 1e-12 (1 + value).
std::vector<double> conductance_sequence(const DiscretizationLadder& ladder, double x, double y,
                                         int levels);
std::vector<double> conductance_sequence(const kernels::KernelSpec& spec, double x, double y,
                                         int levels, int max_level = kDefaultMaxLevel);

/// Raw mode: rho(A_n(i_n(x)) x [0,1]) per level, monotone to zero.
/// Normalized mode divides by the cell mass and converges to c(x) at
/// continuity points.
std::vector<double> vertex_mass_sequence(const DiscretizationLadder& ladder, double x, int levels,
                                         bool normalized);
std::vector<double> vertex_mass_sequence(const kernels::KernelSpec& spec, double x, int levels,
                                         bool normalized, int max_level = kDefaultMaxLevel);

/// Component analysis of a discretized network with a path witness.
class Connectivity {
  public:
    Connectivity(const DiscretizedNetwork& net, double edge_tolerance = 0.0);

    bool connected() const { return component_count_ == 1; }
    int component_count() const { return component_count_; }
    int component_of(int cell) const { return component_[cell]; }
    /// Cells of the first component; the witness set when disconnected.
    StateSet first_component() const;
    /// A cell path i = p_0, ..., p_k = j crossing only positive weights;
    /// empty when the cells lie in different components.
    std::vector<int> path(int from, int to) const;

  private:
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> component_;
    int component_count_;
};

Connectivity check_connected(const DiscretizedNetwork& net, double edge_tolerance = 0.0);

}  // namespace symmarkov::dyadic
