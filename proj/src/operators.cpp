#include "symmarkov/operators.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "symmarkov/rng.hpp"

namespace symmarkov::markov {

namespace {

double scaled(double diff, double magnitude) { return std::abs(diff) / (1.0 + std::abs(magnitude)); }

/// max_{xy} |M - M^T| with the battery's (1 + magnitude) scaling.
double max_asymmetry(const Eigen::MatrixXd& M) {
    double worst = 0.0;
    for (long i = 0; i < M.rows(); ++i)
        for (long j = i + 1; j < M.cols(); ++j) {
            double mag = std::max(std::abs(M(i, j)), std::abs(M(j, i)));
            worst = std::max(worst, scaled(M(i, j) - M(j, i), mag));
        }
    return worst;
}

/// Scaled asymmetry of the bilinear form (k,l) -> sum_{i<=k, j<=l} M_ij
/// over all prefix-set pairs.  Detects any asymmetric M: the first
/// nonzero entry of M - M^T shows up in one of the four adjacent prefix
/// rectangles around it.
double prefix_form_asymmetry(const Eigen::MatrixXd& M) {
    long n = M.rows();
    Eigen::MatrixXd S(n, n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) {
            double v = M(i, j);
            if (i > 0) v += S(i - 1, j);
            if (j > 0) v += S(i, j - 1);
            if (i > 0 && j > 0) v -= S(i - 1, j - 1);
            S(i, j) = v;
        }
    double worst = 0.0;
    for (long k = 0; k < n; ++k)
        for (long l = k + 1; l < n; ++l)
            worst = std::max(worst, scaled(S(k, l) - S(l, k), std::max(std::abs(S(k, l)), std::abs(S(l, k)))));
    return worst;
}

}  // namespace

MarkovSystem::MarkovSystem(FiniteSymmetricMeasure measure) : measure_(std::move(measure)) {}

StateFunction MarkovSystem::apply_R(const StateFunction& f) const {
    return measure_.apply_W(f).cwiseQuotient(measure_.mu());
}

StateFunction MarkovSystem::apply_P(const StateFunction& f) const {
    return measure_.apply_W(f).cwiseQuotient(measure_.nu());
}

StateFunction MarkovSystem::apply_P_power(StateFunction f, int n) const {
    for (int k = 0; k < n; ++k) f = apply_P(f);
    return f;
}

StateFunction MarkovSystem::apply_Delta(const StateFunction& f) const {
    return measure_.c().cwiseProduct(f - apply_P(f));
}

StateFunction MarkovSystem::apply_Delta_via_R(const StateFunction& f) const {
    return measure_.c().cwiseProduct(f) - apply_R(f);
}

Eigen::MatrixXd MarkovSystem::P_dense() const {
    Eigen::MatrixXd W = measure_.dense();
    return measure_.nu().cwiseInverse().asDiagonal() * W;
}

Eigen::MatrixXd MarkovSystem::R_dense() const {
    Eigen::MatrixXd W = measure_.dense();
    return measure_.mu().cwiseInverse().asDiagonal() * W;
}

Eigen::VectorXd MarkovSystem::push_measure(const Eigen::VectorXd& m) const {
    if (m.size() != size()) throw DimensionError("measure vector length mismatch");
    // (m P)_j = sum_i m_i W_ij / nu_i: apply W row-wise to the scaled mass.
    Eigen::VectorXd scaled_mass = m.cwiseQuotient(measure_.nu());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(size());
    for (int i = 0; i < size(); ++i) {
        auto row = measure_.row(i);
        for (int k = 0; k < row.size; ++k) out[row.cols[k]] += scaled_mass[i] * row.weights[k];
    }
    return out;
}

double l2_mu(const MarkovSystem& sys, const StateFunction& f) {
    return std::sqrt(inner_mu(sys, f, f));
}

double l2_nu(const MarkovSystem& sys, const StateFunction& f) {
    return std::sqrt(inner_nu(sys, f, f));
}

double l1_nu(const MarkovSystem& sys, const StateFunction& f) {
    if (f.size() != sys.size()) throw DimensionError("function length mismatch");
    return f.cwiseAbs().dot(sys.nu());
}

double l1_mu(const MarkovSystem& sys, const StateFunction& f) {
    if (f.size() != sys.size()) throw DimensionError("function length mismatch");
    return f.cwiseAbs().dot(sys.mu());
}

double inner_mu(const MarkovSystem& sys, const StateFunction& f, const StateFunction& g) {
    if (f.size() != sys.size() || g.size() != sys.size())
        throw DimensionError("function length mismatch");
    return f.cwiseProduct(g).dot(sys.mu());
}

double inner_nu(const MarkovSystem& sys, const StateFunction& f, const StateFunction& g) {
    if (f.size() != sys.size() || g.size() != sys.size())
        throw DimensionError("function length mismatch");
    return f.cwiseProduct(g).dot(sys.nu());
}

double l2_rho_sq(const MarkovSystem& sys, const PairFunction& g) {
    if (g.rows() != sys.size() || g.cols() != sys.size())
        throw DimensionError("pair function must be n x n");
    double total = 0.0;
    for (int i = 0; i < sys.size(); ++i) {
        auto row = sys.measure().row(i);
        for (int k = 0; k < row.size; ++k) {
            double v = g(i, row.cols[k]);
            total += v * v * row.weights[k];
        }
    }
    return total;
}

PairFunction embed_J(const MarkovSystem& sys, const StateFunction& f) {
    if (f.size() != sys.size()) throw DimensionError("function length mismatch");
    PairFunction g = PairFunction::Zero(sys.size(), sys.size());
    for (int i = 0; i < sys.size(); ++i) {
        auto row = sys.measure().row(i);
        for (int k = 0; k < row.size; ++k) g(i, row.cols[k]) = f[i];
    }
    return g;
}

StateFunction coembed_Jstar(const MarkovSystem& sys, const PairFunction& g) {
    if (g.rows() != sys.size() || g.cols() != sys.size())
        throw DimensionError("pair function must be n x n");
    StateFunction out = StateFunction::Zero(sys.size());
    for (int i = 0; i < sys.size(); ++i) {
        auto row = sys.measure().row(i);
        double s = 0.0;
        for (int k = 0; k < row.size; ++k) s += g(i, row.cols[k]) * row.weights[k];
        out[i] = s / sys.nu()[i];
    }
    return out;
}

Eigen::VectorXd spectrum_P(const MarkovSystem& sys) {
    int n = sys.size();
    Eigen::VectorXd inv_sqrt_nu = sys.nu().cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        auto row = sys.measure().row(i);
        for (int k = 0; k < row.size; ++k)
            S(i, row.cols[k]) = row.weights[k] * inv_sqrt_nu[i] * inv_sqrt_nu[row.cols[k]];
    }
    // The conjugate is symmetric in exact arithmetic; symmetrize the last
    // ulps so the solver sees an exactly symmetric matrix.
    S = 0.5 * (S + S.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
    if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalue iteration failed");
    return solver.eigenvalues();
}

ReversibilityReport reversibility_battery(const MarkovSystem& sys, int n_max, double tol,
                                          std::uint64_t probe_seed) {
    const int n = sys.size();
    const Eigen::MatrixXd W = sys.measure().dense();
    const Eigen::MatrixXd P = sys.P_dense();
    ReversibilityReport report;
    report.depth = n_max;
    report.tolerance = tol;

    // (i) int_B c P(x,A) dmu = int_A c P(x,B) dmu over singleton pairs:
    // entrywise symmetry of diag(nu) P.
    Eigen::MatrixXd nuP = sys.nu().asDiagonal() * P;
    report.clauses.push_back({"i", "detailed balance over singleton pairs", max_asymmetry(nuP), false});

    // (ii) the same for the n-step kernels P_n.
    {
        double worst = 0.0;
        Eigen::MatrixXd M = nuP;
        for (int step = 1; step <= n_max; ++step) {
            if (step > 1) M = (M * P).eval();
            worst = std::max(worst, max_asymmetry(M));
        }
        report.clauses.push_back({"ii", "detailed balance for P_n, n <= depth", worst, false});
    }

    // (iii) P self-adjoint on L2(nu) and nu P = nu.
    {
        double worst = 0.0;
        rng::Stream probe(probe_seed, /*stream=*/0xba77e7);
        for (int trial = 0; trial < 32; ++trial) {
            Eigen::VectorXd f(n), g(n);
            for (int i = 0; i < n; ++i) f[i] = probe.next_range(-1.0, 1.0);
            for (int i = 0; i < n; ++i) g[i] = probe.next_range(-1.0, 1.0);
            double lhs = inner_nu(sys, sys.apply_P(f), g);
            double rhs = inner_nu(sys, f, sys.apply_P(g));
            worst = std::max(worst, scaled(lhs - rhs, std::max(std::abs(lhs), std::abs(rhs))));
        }
        Eigen::VectorXd nuP_vec = sys.push_measure(sys.nu());
        for (int i = 0; i < n; ++i)
            worst = std::max(worst, scaled(nuP_vec[i] - sys.nu()[i], sys.nu()[i]));
        report.clauses.push_back({"iii", "P self-adjoint on L2(nu) and nu P = nu", worst, false});
    }

    // (iv) pointwise symmetry of rho: W = W^T.
    report.clauses.push_back({"iv", "pointwise symmetry of the weight matrix", max_asymmetry(W), false});

    // (v) symmetry of the operator R in L2(mu): diag(mu) R = W again, but
    // evaluated through R as built.
    {
        Eigen::MatrixXd muR = sys.mu().asDiagonal() * sys.R_dense();
        report.clauses.push_back({"v", "R symmetric in L2(mu)", max_asymmetry(muR), false});
    }

    // (vi) symmetry of rho as a measure: rectangle masses over prefix-set
    // pairs (guaranteed detection) plus random set pairs.
    {
        double worst = prefix_form_asymmetry(W);
        rng::Stream sets(probe_seed, /*stream=*/0x5e75);
        for (int trial = 0; trial < 32 && n >= 2; ++trial) {
            StateSet A, B;
            for (int i = 0; i < n; ++i) {
                if (sets.next_uniform() < 0.5) A.push_back(i);
                if (sets.next_uniform() < 0.5) B.push_back(i);
            }
            if (A.empty() || B.empty()) continue;
            double ab = rectangle_mass(sys.measure(), A, B);
            double ba = rectangle_mass(sys.measure(), B, A);
            worst = std::max(worst, scaled(ab - ba, std::max(ab, ba)));
        }
        report.clauses.push_back({"vi", "rho(A x B) = rho(B x A)", worst, false});
    }

    // (vii) symmetry of every rho_n, via the bilinear forms
    // <chi_A, P^n chi_B>_{L2(nu)} over prefix pairs.
    {
        double worst = 0.0;
        Eigen::MatrixXd M = nuP;
        for (int step = 1; step <= n_max; ++step) {
            if (step > 1) M = (M * P).eval();
            worst = std::max(worst, prefix_form_asymmetry(M));
        }
        report.clauses.push_back({"vii", "every rho_n symmetric, n <= depth", worst, false});
    }

    report.max_residual = 0.0;
    report.all_pass = true;
    for (ClauseResult& clause : report.clauses) {
        clause.pass = clause.residual <= tol;
        report.max_residual = std::max(report.max_residual, clause.residual);
        report.all_pass = report.all_pass && clause.pass;
    }
    return report;
}

MuPDensity mu_P_density(const MarkovSystem& sys) {
    MuPDensity d;
    d.pushforward = sys.push_measure(sys.mu()).cwiseQuotient(sys.mu());
    d.fiber_formula = Eigen::VectorXd::Zero(sys.size());
    for (int i = 0; i < sys.size(); ++i) {
        auto row = sys.measure().row(i);
        double s = 0.0;
        for (int k = 0; k < row.size; ++k) s += row.weights[k] / sys.c()[row.cols[k]];
        d.fiber_formula[i] = s / sys.mu()[i];
    }
    d.residual = 0.0;
    for (int i = 0; i < sys.size(); ++i)
        d.residual = std::max(d.residual, scaled(d.pushforward[i] - d.fiber_formula[i],
                                                 d.fiber_formula[i]));
    return d;
}

}  // namespace symmarkov::markov
