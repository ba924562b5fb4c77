#include "symmarkov/energy.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace symmarkov::energy {

namespace {

constexpr int kDenseSolveLimit = 512;

std::vector<char> membership(int n, const StateSet& states) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (int s : states) in[s] = 1;
    return in;
}

/// Conjugate gradient with Jacobi preconditioning for the interior system;
/// used above the dense-factorization size.
Eigen::VectorXd cg_solve(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                         const Eigen::VectorXd& diag, const Eigen::VectorXd& b, double tol) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = r.cwiseQuotient(diag);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    double b_norm = b.norm();
    if (b_norm == 0.0) return x;
    for (long it = 0; it < 40 * b.size() + 100; ++it) {
        Eigen::VectorXd Ap = apply(p);
        double alpha = rz / p.dot(Ap);
        x += alpha * p;
        r -= alpha * Ap;
        if (r.norm() <= tol * b_norm) return x;
        z = r.cwiseQuotient(diag);
        double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
    }
    throw ConvergenceError("conjugate gradient did not reach the requested residual");
}

}  // namespace

EnergyForm::EnergyForm(const FiniteSymmetricMeasure& m, Gauge gauge)
    : measure_(&m), gauge_(gauge) {
    SupportGraph graph(m);
    component_count_ = graph.component_count();
    component_.resize(m.size());
    for (int i = 0; i < m.size(); ++i) component_[i] = graph.component_of(i);
}

double EnergyForm::inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const {
    const int n = measure_->size();
    if (f.size() != n || g.size() != n) throw DimensionError("function length mismatch");
    double total = 0.0;
    for (const Triplet& t : measure_->triplets()) {
        if (t.i == t.j) continue;  // diagonal pairs never contribute to energy
        total += (f[t.i] - f[t.j]) * (g[t.i] - g[t.j]) * t.w;
    }
    return total;
}

double EnergyForm::norm(const Eigen::VectorXd& f) const { return std::sqrt(std::max(0.0, norm_sq(f))); }

Eigen::VectorXd EnergyForm::representative(const Eigen::VectorXd& f) const {
    const int n = measure_->size();
    if (f.size() != n) throw DimensionError("function length mismatch");
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(component_count_);
    if (gauge_ == Gauge::PinnedBase) {
        std::vector<char> seen(static_cast<std::size_t>(component_count_), 0);
        for (int i = 0; i < n; ++i)
            if (!seen[component_[i]]) {
                seen[component_[i]] = 1;
                shift[component_[i]] = f[i];  // smallest index in the component
            }
    } else {
        Eigen::VectorXd mass = Eigen::VectorXd::Zero(component_count_);
        for (int i = 0; i < n; ++i) {
            shift[component_[i]] += f[i] * measure_->nu()[i];
            mass[component_[i]] += measure_->nu()[i];
        }
        shift = shift.cwiseQuotient(mass);
    }
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) out[i] = f[i] - shift[component_[i]];
    return out;
}

IndicatorEnergyReport indicator_energy(const EnergyForm& form, const StateSet& A) {
    const FiniteSymmetricMeasure& m = form.measure();
    std::vector<char> in_a = membership(m.size(), A);
    for (int s : A) m.check_index(s);

    Eigen::VectorXd chi = Eigen::VectorXd::Zero(m.size());
    StateSet complement;
    for (int i = 0; i < m.size(); ++i) {
        if (in_a[i]) chi[i] = 1.0;
        else complement.push_back(i);
    }
    IndicatorEnergyReport report;
    report.crossing_mass = rectangle_mass(m, A, complement);
    report.energy_norm_sq = form.norm_sq(chi);
    report.nu_bound = 0.0;
    for (int i = 0; i < m.size(); ++i)
        if (in_a[i]) report.nu_bound += m.nu()[i];
    report.residual = std::abs(report.crossing_mass - report.energy_norm_sq) /
                      (1.0 + std::abs(report.crossing_mass));
    report.bound_holds = report.crossing_mass <= report.nu_bound * (1.0 + 1e-12) + 1e-12;
    return report;
}

markov::PairFunction drop(const FiniteSymmetricMeasure& m, const Eigen::VectorXd& f) {
    if (f.size() != m.size()) throw DimensionError("function length mismatch");
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    markov::PairFunction g = markov::PairFunction::Zero(m.size(), m.size());
    for (int i = 0; i < m.size(); ++i) {
        auto row = m.row(i);
        for (int k = 0; k < row.size; ++k) g(i, row.cols[k]) = inv_sqrt2 * (f[i] - f[row.cols[k]]);
    }
    return g;
}

double diagram_residual(const markov::MarkovSystem& sys, const Eigen::VectorXd& f) {
    static const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    Eigen::VectorXd via_pairs = coembed_Jstar(sys, drop(sys.measure(), f));
    Eigen::VectorXd direct = inv_sqrt2 * (f - sys.apply_P(f));
    return markov::l2_nu(sys, via_pairs - direct);
}

Eigen::VectorXd harmonic_solve(const markov::MarkovSystem& sys, const StateSet& boundary,
                               const Eigen::VectorXd& boundary_values) {
    const FiniteSymmetricMeasure& m = sys.measure();
    const int n = m.size();
    if (boundary.empty()) throw Error("boundary set must be nonempty");
    if (static_cast<long>(boundary.size()) != boundary_values.size())
        throw DimensionError("boundary set and value list differ in length");
    for (int s : boundary) m.check_index(s);

    std::vector<char> is_boundary = membership(n, boundary);
    std::vector<int> interior;
    std::vector<int> local(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i)
        if (!is_boundary[i]) {
            local[i] = static_cast<int>(interior.size());
            interior.push_back(i);
        }

    Eigen::VectorXd h = Eigen::VectorXd::Zero(n);
    for (std::size_t k = 0; k < boundary.size(); ++k) h[boundary[k]] = boundary_values[k];
    if (interior.empty()) return h;

    // Every interior component must see the boundary, otherwise the
    // Dirichlet problem is singular there.
    {
        std::vector<int> comp(static_cast<std::size_t>(n), -1);
        std::vector<int> stack;
        int labels = 0;
        std::vector<char> touches;
        for (int s : interior) {
            if (comp[s] != -1) continue;
            int label = labels++;
            touches.push_back(0);
            comp[s] = label;
            stack.push_back(s);
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                auto row = m.row(v);
                for (int k = 0; k < row.size; ++k) {
                    int w = row.cols[k];
                    if (row.weights[k] <= 0.0) continue;
                    if (is_boundary[w]) touches[label] = 1;
                    else if (comp[w] == -1) {
                        comp[w] = label;
                        stack.push_back(w);
                    }
                }
            }
        }
        for (int label = 0; label < labels; ++label)
            if (!touches[label])
                throw SingularSystemError("an interior component never meets the boundary");
    }

    const long ni = static_cast<long>(interior.size());
    // Interior system: (diag(nu) - W)_{II} h_I = W_{IB} v_B; symmetric
    // positive definite because every component leaks to the boundary.
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(ni);
    for (long a = 0; a < ni; ++a) {
        auto row = m.row(interior[a]);
        for (int k = 0; k < row.size; ++k)
            if (is_boundary[row.cols[k]]) rhs[a] += row.weights[k] * h[row.cols[k]];
    }

    Eigen::VectorXd solution;
    if (ni <= kDenseSolveLimit) {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(ni, ni);
        for (long a = 0; a < ni; ++a) {
            int i = interior[a];
            M(a, a) = m.nu()[i];
            auto row = m.row(i);
            for (int k = 0; k < row.size; ++k) {
                int j = row.cols[k];
                if (local[j] >= 0) M(a, local[j]) -= row.weights[k];
            }
        }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(M);
        if (ldlt.info() != Eigen::Success)
            throw SingularSystemError("interior system factorization failed");
        solution = ldlt.solve(rhs);
    } else {
        Eigen::VectorXd diag(ni);
        for (long a = 0; a < ni; ++a) diag[a] = m.nu()[interior[a]];
        auto apply = [&](const Eigen::VectorXd& v) {
            Eigen::VectorXd out(ni);
            for (long a = 0; a < ni; ++a) {
                int i = interior[a];
                double s = m.nu()[i] * v[a];
                auto row = m.row(i);
                for (int k = 0; k < row.size; ++k)
                    if (local[row.cols[k]] >= 0) s -= row.weights[k] * v[local[row.cols[k]]];
                out[a] = s;
            }
            return out;
        };
        solution = cg_solve(apply, diag, rhs, 1e-12);
    }
    for (long a = 0; a < ni; ++a) h[interior[a]] = solution[a];
    return h;
}

RoydenParts royden_project(const EnergyForm& form, const markov::MarkovSystem& sys,
                           const Eigen::VectorXd& f, const StateSet& boundary) {
    if (f.size() != sys.size()) throw DimensionError("function length mismatch");
    Eigen::VectorXd boundary_values(boundary.size());
    for (std::size_t k = 0; k < boundary.size(); ++k) boundary_values[k] = f[boundary[k]];
    RoydenParts parts;
    parts.harmonic = harmonic_solve(sys, boundary, boundary_values);
    parts.finitely_supported = f - parts.harmonic;
    double ip = form.inner(parts.finitely_supported, parts.harmonic);
    parts.orthogonality_residual =
        std::abs(ip) / (1.0 + form.norm(parts.finitely_supported) * form.norm(parts.harmonic));
    return parts;
}

HarmonicCalculusReport harmonic_calculus_checks(const markov::MarkovSystem& sys, const Eigen::VectorXd& f,
                                 const StateSet& interior, const Eigen::VectorXd& q, double tol) {
    if (f.size() != sys.size() || q.size() != sys.size())
        throw DimensionError("function length mismatch");
    HarmonicCalculusReport report;

    Eigen::VectorXd delta_f2 = sys.apply_Delta(f.cwiseProduct(f));
    report.square.max_interior_delta_f2 = -std::numeric_limits<double>::infinity();
    for (int i : interior) {
        sys.measure().check_index(i);
        report.square.max_interior_delta_f2 = std::max(report.square.max_interior_delta_f2, delta_f2[i]);
    }
    if (interior.empty()) report.square.max_interior_delta_f2 = 0.0;
    report.square.pass = report.square.max_interior_delta_f2 <= tol;

    Eigen::VectorXd delta_qf = sys.apply_Delta(q.cwiseProduct(f));
    report.product.lhs = markov::inner_mu(sys, Eigen::VectorXd::Ones(sys.size()), delta_qf);
    report.product.rhs = markov::inner_mu(sys, q, sys.apply_Delta(f)) -
                         markov::inner_mu(sys, f, sys.apply_Delta(q));
    report.product.global_sum = report.product.lhs;
    report.product.residual =
        std::abs(report.product.lhs - report.product.rhs) / (1.0 + std::abs(report.product.rhs));
    return report;
}

}  // namespace symmarkov::energy
