#include "symmarkov/green.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "symmarkov/rng.hpp"

namespace symmarkov::green {

namespace {

double scaled(double diff, double magnitude) { return std::abs(diff) / (1.0 + std::abs(magnitude)); }

}  // namespace

int KilledSystem::local_index(int parent_state) const {
    parent_->measure().check_index(parent_state);
    return local_[parent_state];
}

Eigen::VectorXd KilledSystem::nu_window() const {
    Eigen::VectorXd out(window_size());
    for (int a = 0; a < window_size(); ++a) out[a] = parent_->nu()[domain_[a]];
    return out;
}

Eigen::VectorXd KilledSystem::mu_window() const {
    Eigen::VectorXd out(window_size());
    for (int a = 0; a < window_size(); ++a) out[a] = parent_->mu()[domain_[a]];
    return out;
}

Eigen::VectorXd KilledSystem::c_window() const {
    Eigen::VectorXd out(window_size());
    for (int a = 0; a < window_size(); ++a) out[a] = parent_->c()[domain_[a]];
    return out;
}

Eigen::VectorXd KilledSystem::apply_PD(const Eigen::VectorXd& f_local) const {
    if (f_local.size() != window_size()) throw DimensionError("window function length mismatch");
    return (window_W_ * f_local).cwiseQuotient(window_nu_);
}

Eigen::VectorXd KilledSystem::solve_I_minus_PD(const Eigen::VectorXd& b_local) const {
    if (b_local.size() != window_size()) throw DimensionError("window function length mismatch");
    // (I - P_D) x = b  <=>  (diag(nu) - W)_DD x = diag(nu) b.
    return factorization_->solve(window_nu_.cwiseProduct(b_local).eval());
}

Eigen::VectorXd KilledSystem::indicator_local(const StateSet& A) const {
    Eigen::VectorXd chi = Eigen::VectorXd::Zero(window_size());
    for (int s : A) {
        int a = local_index(s);
        if (a < 0)
            throw IndexError("target state " + std::to_string(s) + " lies outside the window");
        chi[a] = 1.0;
    }
    return chi;
}

Eigen::VectorXd KilledSystem::extend_by_zero(const Eigen::VectorXd& f_local) const {
    if (f_local.size() != window_size()) throw DimensionError("window function length mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(parent_->size());
    for (int a = 0; a < window_size(); ++a) out[domain_[a]] = f_local[a];
    return out;
}

double KilledSystem::rho_n_killed(int n, const StateSet& A, const StateSet& B) const {
    Eigen::VectorXd v = indicator_local(B);
    for (int k = 0; k < n; ++k) v = apply_PD(v);
    return indicator_local(A).cwiseProduct(window_nu_).dot(v);
}

KilledSystem kill(const markov::MarkovSystem& sys, const StateSet& domain) {
    KilledSystem ks;
    ks.parent_ = &sys;
    ks.domain_ = domain;
    std::sort(ks.domain_.begin(), ks.domain_.end());
    ks.domain_.erase(std::unique(ks.domain_.begin(), ks.domain_.end()), ks.domain_.end());
    for (int s : ks.domain_) sys.measure().check_index(s);
    const int n = sys.size();
    const int nd = static_cast<int>(ks.domain_.size());
    if (nd == 0) throw Error("window must be nonempty");
    if (nd == n) throw RecurrentDomainError("window equals the whole state space; nothing escapes");

    ks.local_.assign(static_cast<std::size_t>(n), -1);
    for (int a = 0; a < nd; ++a) ks.local_[ks.domain_[a]] = a;

    ks.window_W_ = Eigen::MatrixXd::Zero(nd, nd);
    ks.window_nu_.resize(nd);
    std::vector<char> leaks(static_cast<std::size_t>(nd), 0);
    for (int a = 0; a < nd; ++a) {
        int i = ks.domain_[a];
        ks.window_nu_[a] = sys.nu()[i];
        auto row = sys.measure().row(i);
        for (int k = 0; k < row.size; ++k) {
            int b = ks.local_[row.cols[k]];
            if (b >= 0) ks.window_W_(a, b) = row.weights[k];
            else if (row.weights[k] > 0.0) leaks[a] = 1;
        }
    }

    // Every window component must see escape mass; a sealed component has
    // a stochastic block and the series diverges there.
    {
        std::vector<int> comp(static_cast<std::size_t>(nd), -1);
        std::vector<int> stack;
        for (int s = 0; s < nd; ++s) {
            if (comp[s] != -1) continue;
            bool component_leaks = false;
            comp[s] = s;
            stack.push_back(s);
            std::vector<int> members;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                members.push_back(v);
                component_leaks = component_leaks || leaks[v];
                for (int w = 0; w < nd; ++w)
                    if (ks.window_W_(v, w) > 0.0 && comp[w] == -1) {
                        comp[w] = s;
                        stack.push_back(w);
                    }
            }
            if (!component_leaks)
                throw RecurrentDomainError("a window component has no escape to the complement");
        }
    }

    // Spectral radius through the symmetric conjugate of P_D.
    {
        Eigen::VectorXd inv_sqrt = ks.window_nu_.cwiseSqrt().cwiseInverse();
        Eigen::MatrixXd S = inv_sqrt.asDiagonal() * ks.window_W_ * inv_sqrt.asDiagonal();
        S = 0.5 * (S + S.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(S);
        if (solver.info() != Eigen::Success)
            throw ConvergenceError("window eigenvalue iteration failed");
        ks.spectral_radius_ = solver.eigenvalues().cwiseAbs().maxCoeff();
    }
    if (!(ks.spectral_radius_ < 1.0 - 1e-10))
        throw RecurrentDomainError("window spectral radius " +
                                   std::to_string(ks.spectral_radius_) +
                                   " is not certified below 1");

    Eigen::MatrixXd M = Eigen::MatrixXd(ks.window_nu_.asDiagonal()) - ks.window_W_;
    ks.factorization_ = std::make_shared<Eigen::LDLT<Eigen::MatrixXd>>(M);
    if (ks.factorization_->info() != Eigen::Success)
        throw SingularSystemError("window system factorization failed");
    return ks;
}

GreenFunction green_solve(const KilledSystem& ks, const StateSet& A) {
    GreenFunction g;
    g.target = A;
    Eigen::VectorXd chi = ks.indicator_local(A);
    g.values = ks.solve_I_minus_PD(chi);

    // Post-check of Delta G_A = c chi_A on the window.
    Eigen::VectorXd lhs =
        ks.c_window().cwiseProduct(g.values - ks.apply_PD(g.values));
    Eigen::VectorXd rhs = ks.c_window().cwiseProduct(chi);
    double g_scale = g.values.size() > 0 ? g.values.cwiseAbs().maxCoeff() : 0.0;
    double worst = (lhs - rhs).cwiseAbs().maxCoeff() / (1.0 + g_scale);
    double c_scale = ks.c_window().maxCoeff();
    if (worst > 1e-10 * (1.0 + c_scale))
        throw ConvergenceError("Green solve failed its defining identity, residual " +
                               std::to_string(worst));
    return g;
}

SeriesResult green_series(const KilledSystem& ks, const StateSet& A, double tol) {
    if (!(tol > 0.0)) throw Error("series tolerance must be positive");
    SeriesResult result;
    result.green.target = A;
    const double radius = ks.spectral_radius();
    Eigen::VectorXd term = ks.indicator_local(A);
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(ks.window_size());
    const Eigen::VectorXd nu = ks.nu_window();
    auto nu_norm = [&nu](const Eigen::VectorXd& v) {
        return std::sqrt(v.cwiseProduct(v).dot(nu));
    };
    result.terms_used = 0;
    result.tail_bound = nu_norm(term) / (1.0 - radius);
    // sum_{k>n} ||P^k chi|| <= ||P^{n+1} chi|| / (1 - r) in the nu-norm,
    // since P_D contracts by its spectral radius there.
    const int hard_cap = 100000;
    while (result.terms_used < hard_cap) {
        sum += term;
        result.terms_used += 1;
        term = ks.apply_PD(term);
        result.tail_bound = nu_norm(term) / (1.0 - radius);
        if (result.tail_bound < tol) break;
    }
    result.green.values = sum;
    return result;
}

EnergyIdentityReport green_energy_identities(const KilledSystem& ks,
                                             const energy::EnergyForm& parent_form,
                                             const StateSet& A, const StateSet& B, int terms,
                                             int probe_count, std::uint64_t probe_seed) {
    EnergyIdentityReport report;
    GreenFunction ga = green_solve(ks, A);
    GreenFunction gb = green_solve(ks, B);
    Eigen::VectorXd ga_full = ks.extend_by_zero(ga.values);
    Eigen::VectorXd gb_full = ks.extend_by_zero(gb.values);
    report.inner_product = parent_form.inner(ga_full, gb_full);

    report.series_sum = 0.0;
    Eigen::VectorXd v = ks.indicator_local(B);
    Eigen::VectorXd chi_a_nu = ks.indicator_local(A).cwiseProduct(ks.nu_window());
    for (int n = 0; n < terms; ++n) {
        report.series_sum += chi_a_nu.dot(v);
        v = ks.apply_PD(v);
    }
    report.terms_used = terms;
    const Eigen::VectorXd nu = ks.nu_window();
    auto nu_norm = [&nu](const Eigen::VectorXd& w) {
        return std::sqrt(w.cwiseProduct(w).dot(nu));
    };
    // Remaining rho_n terms are bounded by ||chi_A|| ||P^terms chi_B|| r^k.
    report.series_tail_bound =
        nu_norm(ks.indicator_local(A)) * nu_norm(v) / (1.0 - ks.spectral_radius());

    double defect = std::abs(report.inner_product - report.series_sum);
    report.inner_residual =
        std::max(0.0, defect - report.series_tail_bound) / (1.0 + std::abs(report.inner_product));

    // <f, G_A>_{H_E} = int_A f dnu for window functions f.
    report.pairing_residual = 0.0;
    rng::Stream probes(probe_seed, 0x6ee4);
    for (int trial = 0; trial < probe_count; ++trial) {
        Eigen::VectorXd f_local(ks.window_size());
        for (int a = 0; a < ks.window_size(); ++a) f_local[a] = probes.next_range(-1.0, 1.0);
        Eigen::VectorXd f_full = ks.extend_by_zero(f_local);
        double lhs = parent_form.inner(f_full, ga_full);
        double rhs = ks.indicator_local(A).cwiseProduct(ks.nu_window()).dot(f_local);
        report.pairing_residual = std::max(report.pairing_residual, scaled(lhs - rhs, rhs));
    }
    return report;
}

SymmetricPairReport symmetric_pair_check(const KilledSystem& ks,
                                         const energy::EnergyForm& parent_form, const StateSet& A,
                                         const StateSet& B) {
    SymmetricPairReport report;
    GreenFunction gb = green_solve(ks, B);
    Eigen::VectorXd chi_a_local = ks.indicator_local(A);
    Eigen::VectorXd chi_a_full = ks.extend_by_zero(chi_a_local);
    Eigen::VectorXd gb_full = ks.extend_by_zero(gb.values);

    report.energy_side = parent_form.inner(chi_a_full, gb_full);
    Eigen::VectorXd k_of_g =
        ks.c_window().cwiseProduct(gb.values - ks.apply_PD(gb.values));
    report.operator_side = chi_a_local.cwiseProduct(ks.mu_window()).dot(k_of_g);

    report.overlap = 0.0;
    Eigen::VectorXd chi_b_local = ks.indicator_local(B);
    for (int a = 0; a < ks.window_size(); ++a)
        if (chi_a_local[a] > 0.0 && chi_b_local[a] > 0.0) report.overlap += ks.nu_window()[a];

    report.max_residual =
        std::max({scaled(report.energy_side - report.operator_side, report.overlap),
                  scaled(report.energy_side - report.overlap, report.overlap),
                  scaled(report.operator_side - report.overlap, report.overlap)});
    return report;
}

Decomposition green_decompose(const KilledSystem& ks, const Eigen::VectorXd& f_parent) {
    const markov::MarkovSystem& sys = ks.parent();
    if (f_parent.size() != sys.size()) throw DimensionError("function length mismatch");
    StateSet boundary;
    for (int i = 0; i < sys.size(); ++i)
        if (ks.local_index(i) < 0) boundary.push_back(i);

    Eigen::VectorXd boundary_values(boundary.size());
    for (std::size_t k = 0; k < boundary.size(); ++k) boundary_values[k] = f_parent[boundary[k]];

    Decomposition d;
    d.harmonic = energy::harmonic_solve(sys, boundary, boundary_values);
    Eigen::VectorXd residue_local(ks.window_size());
    for (int a = 0; a < ks.window_size(); ++a)
        residue_local[a] = f_parent[ks.parent_state(a)] - d.harmonic[ks.parent_state(a)];
    d.phi = residue_local - ks.apply_PD(residue_local);

    // Reconstruction: G(phi) + h must reproduce f on the window (and the
    // harmonic part already matches f outside).
    Eigen::VectorXd g_phi = ks.solve_I_minus_PD(d.phi);
    double worst = 0.0;
    for (int a = 0; a < ks.window_size(); ++a) {
        int i = ks.parent_state(a);
        worst = std::max(worst, std::abs(g_phi[a] + d.harmonic[i] - f_parent[i]));
    }
    d.reconstruction_residual = worst / (1.0 + f_parent.cwiseAbs().maxCoeff());
    return d;
}

}  // namespace symmarkov::green
