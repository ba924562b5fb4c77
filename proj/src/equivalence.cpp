#include "symmarkov/equivalence.hpp"

#include <cmath>
#include <limits>

namespace symmarkov::equivalence {

namespace {

double scaled(double diff, double magnitude) { return std::abs(diff) / (1.0 + std::abs(magnitude)); }

}  // namespace

EquivalenceData EquivalenceData::product(Eigen::VectorXd q) {
    for (long i = 0; i < q.size(); ++i)
        if (!(q[i] > 0.0) || !std::isfinite(q[i]))
            throw NonpositiveFactorError("product factor q[" + std::to_string(i) +
                                         "] must be strictly positive");
    EquivalenceData eq;
    eq.product_ = std::move(q);
    return eq;
}

EquivalenceData EquivalenceData::general(Eigen::MatrixXd r) {
    if (r.rows() != r.cols()) throw DimensionError("factor table must be square");
    for (long i = 0; i < r.rows(); ++i)
        for (long j = 0; j < r.cols(); ++j) {
            if (!std::isfinite(r(i, j)))
                throw NonpositiveFactorError("factor table has a non-finite entry");
            if (r(i, j) != r(j, i))
                throw Error("factor table must be symmetric: r(" + std::to_string(i) + "," +
                            std::to_string(j) + ") differs from its mirror");
        }
    EquivalenceData eq;
    eq.table_ = std::move(r);
    return eq;
}

const Eigen::VectorXd& EquivalenceData::q() const {
    if (!product_) throw NonProductFormError("equivalence data is not in product form");
    return *product_;
}

EquivalenceData EquivalenceData::inverse() const {
    if (product_) return product(product_->cwiseInverse());
    Eigen::MatrixXd inv = table_;
    for (long i = 0; i < inv.rows(); ++i)
        for (long j = 0; j < inv.cols(); ++j)
            inv(i, j) = inv(i, j) > 0.0 ? 1.0 / inv(i, j) : 0.0;
    return general(std::move(inv));
}

FiniteSymmetricMeasure transform_measure(const FiniteSymmetricMeasure& m,
                                         const EquivalenceData& eq) {
    if (eq.size() != m.size()) throw DimensionError("factor size does not match state count");
    std::vector<Triplet> entries;
    entries.reserve(m.triplets().size());
    for (const Triplet& t : m.triplets()) {
        double r = eq.factor(t.i, t.j);
        if (!(r > 0.0))
            throw NonpositiveFactorError("factor vanishes on the support pair (" +
                                         std::to_string(t.i) + "," + std::to_string(t.j) + ")");
        entries.push_back({t.i, t.j, r * t.w});
    }
    std::vector<double> mu(m.mu().data(), m.mu().data() + m.size());
    return FiniteSymmetricMeasure::build(std::move(mu), entries, m.allow_diagonal());
}

MarkovPrimeResult markov_prime_via_formula(const markov::MarkovSystem& sys,
                                           const EquivalenceData& eq, const Eigen::VectorXd& f) {
    const int n = sys.size();
    if (f.size() != n) throw DimensionError("function length mismatch");
    FiniteSymmetricMeasure transformed = transform_measure(sys.measure(), eq);
    markov::MarkovSystem sys_prime{transformed};

    MarkovPrimeResult result;
    result.direct = sys_prime.apply_P(f);
    result.via_formula.resize(n);
    result.ratio_residual = 0.0;
    result.reciprocal_residual = 0.0;
    for (int x = 0; x < n; ++x) {
        auto row = sys.measure().row(x);
        double numer = 0.0, denom = 0.0, recip = 0.0;
        for (int k = 0; k < row.size; ++k) {
            int y = row.cols[k];
            double p_xy = row.weights[k] / sys.nu()[x];
            double r_xy = eq.factor(x, y);
            numer += p_xy * r_xy * f[y];
            denom += p_xy * r_xy;
            recip += (sys_prime.measure().weight(x, y) / sys_prime.nu()[x]) / r_xy;
        }
        if (denom == 0.0) throw Error("P(r_x)(x) vanished; factor not positive on the support");
        result.via_formula[x] = numer / denom;

        double ratio = sys_prime.c()[x] / sys.c()[x];
        result.ratio_residual = std::max(result.ratio_residual, scaled(denom - ratio, ratio));
        result.reciprocal_residual =
            std::max(result.reciprocal_residual, scaled(denom * recip - 1.0, 1.0));
    }
    double f_scale = f.cwiseAbs().maxCoeff();
    result.residual = (result.via_formula - result.direct).cwiseAbs().maxCoeff() / (1.0 + f_scale);
    return result;
}

LaplacianPrimeReport laplacian_prime_identity(const markov::MarkovSystem& sys,
                                              const EquivalenceData& eq, const Eigen::VectorXd& f,
                                              const StateSet& interior) {
    const int n = sys.size();
    if (f.size() != n) throw DimensionError("function length mismatch");
    const Eigen::VectorXd& q = eq.q();  // throws NonProductFormError otherwise
    markov::MarkovSystem sys_prime{transform_measure(sys.measure(), eq)};

    Eigen::VectorXd direct = sys_prime.apply_Delta(f);
    Eigen::VectorXd qf = q.cwiseProduct(f);
    Eigen::VectorXd delta_qf = sys.apply_Delta(qf);
    Eigen::VectorXd pq_minus_q = sys.apply_P(q) - q;
    Eigen::VectorXd via_identity =
        sys.c().cwiseProduct(q).cwiseProduct(f).cwiseProduct(pq_minus_q) +
        q.cwiseProduct(delta_qf);

    LaplacianPrimeReport report;
    double f_scale = 1.0 + f.cwiseAbs().maxCoeff();
    report.full_identity_residual = (direct - via_identity).cwiseAbs().maxCoeff() / f_scale;

    report.q_interior_harmonic = true;
    for (int i : interior)
        report.q_interior_harmonic =
            report.q_interior_harmonic && std::abs(pq_minus_q[i]) <= 1e-12 * (1.0 + std::abs(q[i]));

    report.reduced_identity_residual = std::numeric_limits<double>::quiet_NaN();
    report.harmonic_equivalence = true;
    if (!interior.empty() && report.q_interior_harmonic) {
        Eigen::VectorXd reduced = q.cwiseProduct(delta_qf);
        double worst = 0.0;
        bool equivalence = true;
        for (int i : interior) {
            worst = std::max(worst, std::abs(direct[i] - reduced[i]) / f_scale);
            bool f_harmonic_prime = std::abs(direct[i]) <= 1e-10 * f_scale;
            bool qf_harmonic = std::abs(delta_qf[i]) <= 1e-10 * f_scale;
            equivalence = equivalence && (f_harmonic_prime == qf_harmonic);
        }
        report.reduced_identity_residual = worst;
        report.harmonic_equivalence = equivalence;
    }
    return report;
}

double q_isometry_check(const energy::EnergyForm& form, const energy::EnergyForm& form_prime,
                        const markov::MarkovSystem& sys, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& f, double harmonic_tol) {
    const int n = sys.size();
    if (f.size() != n || q.size() != n) throw DimensionError("function length mismatch");
    Eigen::VectorXd delta_q = sys.apply_Delta(q);
    for (int i = 0; i < n; ++i)
        if (f[i] != 0.0 && std::abs(delta_q[i]) > harmonic_tol * (1.0 + std::abs(q[i])))
            throw SupportViolationError("f is supported at state " + std::to_string(i) +
                                        " where q is not harmonic");
    double lhs = form_prime.norm_sq(f);
    double rhs = form.norm_sq(q.cwiseProduct(f));
    return std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
}

GeneralRnResult general_equivalence_rn(const FiniteSymmetricMeasure& m,
                                       const FiniteSymmetricMeasure& m_prime,
                                       const std::optional<Eigen::VectorXd>& q) {
    const int n = m.size();
    if (m_prime.size() != n) throw DimensionError("measures live on different state counts");
    // Shared support is a precondition of fiber equivalence.
    for (const Triplet& t : m.triplets())
        if (!(m_prime.weight(t.i, t.j) > 0.0))
            throw SupportMismatchError("support pair (" + std::to_string(t.i) + "," +
                                       std::to_string(t.j) + ") missing from the second measure");
    for (const Triplet& t : m_prime.triplets())
        if (!(m.weight(t.i, t.j) > 0.0))
            throw SupportMismatchError("support pair (" + std::to_string(t.i) + "," +
                                       std::to_string(t.j) + ") missing from the first measure");

    GeneralRnResult result;
    result.base_density = m.mu().cwiseQuotient(m_prime.mu());  // m = d mu / d mu'
    result.fiber_table = Eigen::MatrixXd::Zero(n, n);
    result.factorization_residual = 0.0;
    for (const Triplet& t : m.triplets()) {
        auto put = [&](int i, int j) {
            double value = (m_prime.weight(i, j) * m.mu()[i]) / (m.weight(i, j) * m_prime.mu()[i]);
            result.fiber_table(i, j) = value;
            double r_pair = m_prime.weight(i, j) / m.weight(i, j);  // d rho'/d rho
            double factored = result.base_density[i] * r_pair;
            result.factorization_residual =
                std::max(result.factorization_residual, scaled(value - factored, factored));
        };
        put(t.i, t.j);
        if (t.i != t.j) put(t.j, t.i);
    }

    result.product_residual = std::numeric_limits<double>::quiet_NaN();
    if (q) {
        if (q->size() != n) throw DimensionError("q length mismatch");
        result.phi = q->cwiseProduct(result.base_density);
        double worst = 0.0;
        for (const Triplet& t : m.triplets()) {
            auto check = [&](int i, int j) {
                double lhs = result.fiber_table(i, j) / (*q)[j];
                worst = std::max(worst, scaled(lhs - result.phi[i], result.phi[i]));
            };
            check(t.i, t.j);
            if (t.i != t.j) check(t.j, t.i);
        }
        result.product_residual = worst;
    }
    return result;
}

}  // namespace symmarkov::equivalence
