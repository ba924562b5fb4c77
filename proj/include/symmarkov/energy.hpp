#pragma once

#include <Eigen/Dense>

#include "symmarkov/measure.hpp"
#include "symmarkov/operators.hpp"

namespace symmarkov::energy {

/// Representative convention for the quotient of H_E by constants.
enum class Gauge {
    PinnedBase,   // representative vanishes at the smallest state of each component
    MeanZeroNu,   // representative has nu-mean zero per component
};

/// The Dirichlet form of a symmetric measure:
///   <f, g>_{H_E} = 1/2 sum_{i,j} (f_i - f_j)(g_i - g_j) W[i][j].
/// Values are gauge independent; the gauge only selects representatives.
class EnergyForm {
  public:
    explicit EnergyForm(const FiniteSymmetricMeasure& m, Gauge gauge = Gauge::PinnedBase);

    const FiniteSymmetricMeasure& measure() const { return *measure_; }
    Gauge gauge() const { return gauge_; }

    double inner(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
    double norm_sq(const Eigen::VectorXd& f) const { return inner(f, f); }
    double norm(const Eigen::VectorXd& f) const;

    /// Gauge-fixed representative of the class of f (per component).
    Eigen::VectorXd representative(const Eigen::VectorXd& f) const;

  private:
    const FiniteSymmetricMeasure* measure_;
    Gauge gauge_;
    std::vector<int> component_;
    int component_count_;
};

struct IndicatorEnergyReport {
    double crossing_mass;   // rho(A x A^c)
    double energy_norm_sq;  // ||chi_A||^2 via the quadratic form
    double nu_bound;        // nu(A)
    double residual;        // |crossing_mass - energy_norm_sq| scaled
    bool bound_holds;       // crossing_mass <= nu(A) (up to rounding)
};

/// ||chi_A||^2_{H_E} = rho(A x A^c) <= nu(A), evaluated on both routes.
IndicatorEnergyReport indicator_energy(const EnergyForm& form, const StateSet& A);

/// The voltage drop (del f)(i,j) = (f_i - f_j)/sqrt(2); an isometry
/// H_E -> L2(rho).
markov::PairFunction drop(const FiniteSymmetricMeasure& m, const Eigen::VectorXd& f);

/// || J*(del f) - (f - Pf)/sqrt(2) ||_{L2(nu)}: the commuting-diagram
/// defect, zero in exact arithmetic.
double diagram_residual(const markov::MarkovSystem& sys, const Eigen::VectorXd& f);

/// Dirichlet problem: h = values on the boundary set, (Ph)_i = h_i at every
/// other state.  Solves the SPD interior system diag(nu) - W.
Eigen::VectorXd harmonic_solve(const markov::MarkovSystem& sys, const StateSet& boundary,
                               const Eigen::VectorXd& boundary_values);

struct RoydenParts {
    Eigen::VectorXd finitely_supported;  // vanishes on the boundary
    Eigen::VectorXd harmonic;            // harmonic at interior states
    double orthogonality_residual;       // |<f0, h>_{H_E}| scaled
};

/// f = f0 + h with h the harmonic extension of f's boundary values and f0
/// supported in the window interior; the parts are H_E-orthogonal.
RoydenParts royden_project(const EnergyForm& form, const markov::MarkovSystem& sys,
                           const Eigen::VectorXd& f, const StateSet& boundary);

struct HarmonicSquareReport {
    double max_interior_delta_f2;  // max over interior of Delta(f^2); <= 0 up to rounding
    bool pass;
};

struct ProductRuleReport {
    double lhs;         // integral of Delta(q f) d mu
    double rhs;         // integral of (q Delta f - f Delta q) d mu
    double global_sum;  // integral of Delta(q f) d mu, vanishes identically
    double residual;
};

struct HarmonicCalculusReport {
    HarmonicSquareReport square;
    ProductRuleReport product;
};

/// Checks Delta(f^2) <= 0 at states where f is harmonic and the product
/// rule for integrals of Delta(q f).
HarmonicCalculusReport harmonic_calculus_checks(const markov::MarkovSystem& sys, const Eigen::VectorXd& f,
                                 const StateSet& interior, const Eigen::VectorXd& q,
                                 double tol = 1e-12);

}  // namespace symmarkov::energy
