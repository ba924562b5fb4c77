#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "symmarkov/measure.hpp"
#include "symmarkov/operators.hpp"

namespace symmarkov::paths {

/// Start distribution of an ensemble: a point mass, or nu restricted to a
/// set and normalized.
struct StartLaw {
    enum class Kind { Point, RestrictedNu };
    Kind kind;
    int point = -1;
    StateSet set;

    static StartLaw at(int x) { return {Kind::Point, x, {}}; }
    static StartLaw nu_restricted(StateSet A) { return {Kind::RestrictedNu, -1, std::move(A)}; }
};

/// Seeded collection of sampled chains.  Rebuilding from (seed, start law,
/// horizon, system digest) is bit-identical: each path owns one counter
/// stream, so the ensemble does not depend on sampling order.
struct PathEnsemble {
    std::uint64_t seed = 0;
    StartLaw start{StartLaw::Kind::Point, 0, {}};
    int horizon = 0;
    std::string system_digest;
    /// paths(p, k) = state of path p after k steps; count x (horizon+1).
    Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic> paths;

    long count() const { return paths.rows(); }
};

/// Inverse-CDF sampling of the chain, one counter stream per path.
PathEnsemble sample_paths(const markov::MarkovSystem& sys, const StartLaw& start, int horizon,
                          long count, std::uint64_t seed);

struct LambdaEstimate {
    double estimate;    // nu(A) * fraction of paths with X_n in B
    double std_error;   // binomial formula scaled by nu(A)
    long hits;
    long count;
    double nu_A;
};

/// Monte Carlo estimate of lambda(X_0 in A, X_n in B) = rho_n(A x B); the
/// ensemble must have been drawn from nu restricted to A.
LambdaEstimate estimate_lambda_event(const markov::MarkovSystem& sys, const PathEnsemble& ens,
                                     const StateSet& A, const StateSet& B, int n);

/// Exact (sampling-free) residual of
/// lambda(X_0 in A0, X_1 in A1) = lambda(X_0 in A1, X_1 in A0).
double check_distribution_reversal(const markov::MarkovSystem& sys, const StateSet& A0,
                                   const StateSet& A1);

struct MartingaleReport {
    double max_exact_residual;   // max |P h - h| over the designated harmonic states
    double empirical_drift;      // mean of h(X_{k+1}) - h(X_k) over counted steps
    double drift_std_error;
    long counted_steps;
    bool exact_pass;
    bool empirical_pass;         // |drift| <= 3 sigma
};

/// Exact and sampled martingale diagnostics for h along the ensemble.
/// Steps are counted while the current state is in `harmonic_states`
/// (stopping at the first exit keeps the stopped process a martingale);
/// an empty set means every state.
MartingaleReport martingale_diagnostic(const markov::MarkovSystem& sys, const Eigen::VectorXd& h,
                                       const PathEnsemble& ens,
                                       const StateSet& harmonic_states = {}, double tol = 1e-12);

}  // namespace symmarkov::paths
