#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "symmarkov/measure.hpp"

namespace symmarkov::markov {

/// Function on states, represented as a plain vector.  Which space it
/// lives in (L2(mu), L2(nu), an energy representative) is a property of
/// the norm applied to it, exposed by the l2_* helpers below.
using StateFunction = Eigen::VectorXd;

/// Function on ordered pairs, supported on the support of W; an element
/// of L2(rho).  Dense representation, sized n x n.
using PairFunction = Eigen::MatrixXd;

/// The operator bundle of a symmetric measure: the transfer operator R,
/// the Markov operator P = c^{-1} R, and the Laplacian Delta = c(I - P).
/// Immutable after construction; all applications are pure.
class MarkovSystem {
  public:
    explicit MarkovSystem(FiniteSymmetricMeasure measure);

    const FiniteSymmetricMeasure& measure() const { return measure_; }
    int size() const { return measure_.size(); }
    const Eigen::VectorXd& mu() const { return measure_.mu(); }
    const Eigen::VectorXd& nu() const { return measure_.nu(); }
    const Eigen::VectorXd& c() const { return measure_.c(); }

    /// (R f)_i = sum_j W[i][j] f_j / mu_i.
    StateFunction apply_R(const StateFunction& f) const;

    /// (P f)_i = sum_j W[i][j] f_j / nu_i; P(1) = 1.
    StateFunction apply_P(const StateFunction& f) const;

    /// P applied n times.
    StateFunction apply_P_power(StateFunction f, int n) const;

    /// Delta f = c .* (f - P f); agrees with (cI - R) f.
    StateFunction apply_Delta(const StateFunction& f) const;
    StateFunction apply_Delta_via_R(const StateFunction& f) const;

    double P_entry(int i, int j) const { return measure_.weight(i, j) / measure_.nu()[i]; }

    Eigen::MatrixXd P_dense() const;
    Eigen::MatrixXd R_dense() const;

    /// Pushforward of a measure (row vector action): (m P)_j = sum_i m_i P[i][j].
    Eigen::VectorXd push_measure(const Eigen::VectorXd& m) const;

  private:
    FiniteSymmetricMeasure measure_;
};

// -- norms and inner products -------------------------------------------------

double l2_mu(const MarkovSystem& sys, const StateFunction& f);
double l2_nu(const MarkovSystem& sys, const StateFunction& f);
double l1_nu(const MarkovSystem& sys, const StateFunction& f);
double l1_mu(const MarkovSystem& sys, const StateFunction& f);
double inner_mu(const MarkovSystem& sys, const StateFunction& f, const StateFunction& g);
double inner_nu(const MarkovSystem& sys, const StateFunction& f, const StateFunction& g);
/// ||g||_{L2(rho)}^2 = sum over ordered support pairs of g(i,j)^2 W[i][j].
double l2_rho_sq(const MarkovSystem& sys, const PairFunction& g);

// -- embedding J and its co-isometry ------------------------------------------

/// (J f)(i, j) = f_i; isometry L2(nu) -> L2(rho).
PairFunction embed_J(const MarkovSystem& sys, const StateFunction& f);

/// (J* g)_i = sum_j g(i,j) P[i][j]; J* J = identity.
StateFunction coembed_Jstar(const MarkovSystem& sys, const PairFunction& g);

// -- spectra -------------------------------------------------------------------

/// Eigenvalues of P as a self-adjoint operator on L2(nu), ascending.
/// Computed on the symmetric conjugate D^{1/2} P D^{-1/2}, D = diag(nu).
Eigen::VectorXd spectrum_P(const MarkovSystem& sys);

// -- the reversibility battery -------------------------------------------------

struct ClauseResult {
    std::string id;           // "i" .. "vii"
    std::string description;
    double residual;          // scaled by 1/(1 + magnitude)
    bool pass;
};

struct ReversibilityReport {
    std::vector<ClauseResult> clauses;
    int depth;
    double tolerance;
    bool all_pass;
    double max_residual;
};

/// Evaluates the seven equivalent reversibility clauses with pass/fail and
/// max residual each.  Runs on any system, including deliberately broken
/// ones built with validation off; reports, never throws.
ReversibilityReport reversibility_battery(const MarkovSystem& sys, int n_max = 6,
                                          double tol = 1e-12, std::uint64_t probe_seed = 0);

// -- Radon-Nikodym derivative of mu P ------------------------------------------

struct MuPDensity {
    Eigen::VectorXd pushforward;     // (mu P)_i / mu_i
    Eigen::VectorXd fiber_formula;   // sum_j W[i][j] / (mu_i c_j)
    double residual;
};

/// Both evaluation routes of d(mu P)/d(mu); they must agree to rounding.
MuPDensity mu_P_density(const MarkovSystem& sys);

}  // namespace symmarkov::markov
