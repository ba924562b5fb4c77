#pragma once

#include <Eigen/Dense>
#include <optional>

#include "symmarkov/energy.hpp"
#include "symmarkov/measure.hpp"
#include "symmarkov/operators.hpp"

namespace symmarkov::equivalence {

/// A symmetric positive density r on pairs, either a full table r(i,j) or
/// the product form r(i,j) = q_i q_j.  Product form is declared by the
/// caller, never inferred.
class EquivalenceData {
  public:
    static EquivalenceData product(Eigen::VectorXd q);
    static EquivalenceData general(Eigen::MatrixXd r);

    bool is_product() const { return product_.has_value(); }
    const Eigen::VectorXd& q() const;
    double factor(int i, int j) const {
        return product_ ? (*product_)[i] * (*product_)[j] : table_(i, j);
    }
    int size() const { return product_ ? static_cast<int>(product_->size()) : static_cast<int>(table_.rows()); }

    /// r with every entry inverted; swaps the roles of rho and rho'.
    EquivalenceData inverse() const;

  private:
    EquivalenceData() = default;
    std::optional<Eigen::VectorXd> product_;
    Eigen::MatrixXd table_;
};

/// W' = r .* W with the base measure unchanged (strong equivalence).
FiniteSymmetricMeasure transform_measure(const FiniteSymmetricMeasure& m,
                                         const EquivalenceData& eq);

struct MarkovPrimeResult {
    Eigen::VectorXd via_formula;       // P'(f) evaluated through the original P only
    Eigen::VectorXd direct;            // P'(f) from W' row-normalization
    double residual;                   // agreement of the two routes
    double ratio_residual;             // P(r_x)(x) = c'(x)/c(x)
    double reciprocal_residual;        // P(r_x)(x) * P'(1/r_x)(x) = 1
};

/// P'(f)(x) = P(f r_x)(x) / P(r_x)(x), evaluated both ways.
MarkovPrimeResult markov_prime_via_formula(const markov::MarkovSystem& sys,
                                           const EquivalenceData& eq, const Eigen::VectorXd& f);

struct LaplacianPrimeReport {
    double full_identity_residual;     // Delta'(f) = c q f (P(q) - q) + q Delta(q f)
    double reduced_identity_residual;  // Delta'(f) = q Delta(q f) at interior (harmonic q)
    bool harmonic_equivalence;         // f in Harm(Delta') <=> q f in Harm(Delta) at interior
    bool q_interior_harmonic;
};

/// Product-form Laplacian identity; the reduced clause is evaluated at the
/// given interior states when q is harmonic there.
LaplacianPrimeReport laplacian_prime_identity(const markov::MarkovSystem& sys,
                                              const EquivalenceData& eq, const Eigen::VectorXd& f,
                                              const StateSet& interior = {});

/// | ||f||^2_{H_E(rho')} - ||q f||^2_{H_E(rho)} |, admissible only when q is
/// harmonic wherever f is supported.
double q_isometry_check(const energy::EnergyForm& form, const energy::EnergyForm& form_prime,
                        const markov::MarkovSystem& sys, const Eigen::VectorXd& q,
                        const Eigen::VectorXd& f, double harmonic_tol = 1e-10);

struct GeneralRnResult {
    Eigen::MatrixXd fiber_table;       // d rho'_x / d rho_x on the shared support
    Eigen::VectorXd base_density;      // m = d mu / d mu'
    double factorization_residual;     // table = m(x) r_x(y) on support
    Eigen::VectorXd phi;               // product case: phi(x) = q(x) d mu/d mu'(x)
    double product_residual;           // (1/q(y)) table(x,y) = phi(x), NaN if no q given
};

/// Fiber Radon-Nikodym derivatives between two symmetric measures with
/// shared support but possibly different base measures.
GeneralRnResult general_equivalence_rn(const FiniteSymmetricMeasure& m,
                                       const FiniteSymmetricMeasure& m_prime,
                                       const std::optional<Eigen::VectorXd>& q = std::nullopt);

}  // namespace symmarkov::equivalence
