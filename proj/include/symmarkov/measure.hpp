#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "symmarkov/errors.hpp"

namespace symmarkov {

/// One weighted unordered pair of states.
struct Triplet {
    int i;
    int j;
    double w;
};

/// Subset of {0..n-1}; order carries no meaning, duplicates rejected on use.
using StateSet = std::vector<int>;

/// A symmetric nonnegative weight matrix W over n states together with a
/// strictly positive base measure mu.  W[i][j] is the mass the symmetric
/// measure assigns to the ordered pair (i,j); symmetry W = W^T is enforced
/// at construction unless the caller explicitly bypasses validation (used
/// to demonstrate detection of broken inputs, never for modeling).
///
/// Storage is adjacency-list (CSR) so everything works unchanged from
/// 2-state toy networks to discretized kernels with thousands of cells.
class FiniteSymmetricMeasure {
  public:
    /// Validating constructor.  Each unordered pair may appear once, or
    /// twice with equal weight (the mirrored listing).
    static FiniteSymmetricMeasure build(std::vector<double> mu, const std::vector<Triplet>& entries,
                                        bool allow_diagonal = false);

    /// Builds from a full weight matrix without requiring W = W^T.
    /// Row sums and base weights are still validated; `symmetric()`
    /// reports whether the input happened to be symmetric.
    static FiniteSymmetricMeasure build_unchecked(std::vector<double> mu, const Eigen::MatrixXd& W,
                                                  bool allow_diagonal = true);

    int size() const { return n_; }
    const Eigen::VectorXd& mu() const { return mu_; }
    bool allow_diagonal() const { return allow_diagonal_; }
    bool symmetric() const { return symmetric_; }

    /// Total fiber mass per state: nu_i = sum_j W[i][j].
    const Eigen::VectorXd& nu() const { return nu_; }
    /// c_i = nu_i / mu_i, the Radon-Nikodym derivative d(nu)/d(mu).
    const Eigen::VectorXd& c() const { return c_; }

    double weight(int i, int j) const;
    double total_mass() const { return total_mass_; }

    /// Canonical triplet list: i <= j, sorted lexicographically, zero
    /// weights dropped.  Basis of the bit-stable JSON writer.
    const std::vector<Triplet>& triplets() const { return triplets_; }

    /// Row adjacency (both orientations, diagonal once).
    struct Row {
        const int* cols;
        const double* weights;
        int size;
    };
    Row row(int i) const;

    /// y = (W f): plain weighted adjacency action, fixed summation order.
    Eigen::VectorXd apply_W(const Eigen::VectorXd& f) const;

    /// Dense view; intended for eigensolvers and small systems.
    Eigen::MatrixXd dense() const;

    /// SHA-256 over a canonical byte encoding of (n, mu, triplets, flag);
    /// identifies the measure in manifests and path ensembles.
    std::string digest() const;

    void check_index(int i) const {
        if (i < 0 || i >= n_) throw IndexError("state " + std::to_string(i) + " out of range [0," + std::to_string(n_) + ")");
    }

  private:
    FiniteSymmetricMeasure() = default;
    void finalize();  // builds CSR, nu, c; validates positivity

    int n_ = 0;
    Eigen::VectorXd mu_;
    Eigen::VectorXd nu_;
    Eigen::VectorXd c_;
    bool allow_diagonal_ = false;
    bool symmetric_ = true;
    double total_mass_ = 0.0;
    std::vector<Triplet> triplets_;        // canonical unordered pairs (symmetric case)
    std::vector<Triplet> directed_;        // all nonzero (i,j) entries, row-major
    std::vector<int> row_ptr_;
    std::vector<int> col_;
    std::vector<double> val_;
};

/// The disintegration bundle: fiber totals c, the measure nu = c mu, and
/// row access to the fiber measures rho_x(j) = W[i][j] / mu_i.
struct DerivedMeasures {
    Eigen::VectorXd c;
    Eigen::VectorXd nu;

    /// rho_x({j}) for the fiber over state i.
    static double fiber(const FiniteSymmetricMeasure& m, int i, int j) {
        return m.weight(i, j) / m.mu()[i];
    }
};

DerivedMeasures derive(const FiniteSymmetricMeasure& m);

/// Undirected support graph: edge (i,j) iff W[i][j] > edge_tolerance.
class SupportGraph {
  public:
    explicit SupportGraph(const FiniteSymmetricMeasure& m, double edge_tolerance = 0.0);

    int component_count() const { return component_count_; }
    int component_of(int i) const { return component_[i]; }
    const std::vector<int>& neighbors(int i) const { return adjacency_[i]; }
    /// States of one component, ascending.
    StateSet component_members(int label) const;

  private:
    std::vector<std::vector<int>> adjacency_;
    std::vector<int> component_;
    int component_count_ = 0;
};

/// rho(A x B) = sum over A x B of W.
double rectangle_mass(const FiniteSymmetricMeasure& m, const StateSet& A, const StateSet& B);

/// rho_n(A x B) = <chi_A, P^n chi_B>_{L2(nu)}, computed by applying P to
/// chi_B iteratively; P^n is never materialized.
double rho_n_mass(const FiniteSymmetricMeasure& m, int n, const StateSet& A, const StateSet& B);

/// rho^# = (rho + rho o theta) / 2 realized as W# = (R + R^T)/2.
FiniteSymmetricMeasure symmetrize(const Eigen::MatrixXd& rho_raw, std::vector<double> mu,
                                  bool allow_diagonal = false);

struct IrreducibilityResult {
    bool irreducible;
    /// A closed witness set (one connected component) when decomposable.
    StateSet witness;
};

IrreducibilityResult analyze_irreducibility(const FiniteSymmetricMeasure& m,
                                            double edge_tolerance = 0.0);

struct Attainability {
    bool reachable;
    int steps;  // smallest n >= 1 with P^n(x, B) > 0; meaningful iff reachable
};

/// Smallest n >= 1 such that the n-step kernel from x charges B, via the
/// sets A_n(x) = union of supports reachable in exactly n steps.
Attainability attainable(const FiniteSymmetricMeasure& m, int x, const StateSet& B);

}  // namespace symmarkov
