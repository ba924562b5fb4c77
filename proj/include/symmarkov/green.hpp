#pragma once

#include <Eigen/Dense>
#include <memory>

#include "symmarkov/energy.hpp"
#include "symmarkov/measure.hpp"
#include "symmarkov/operators.hpp"

namespace symmarkov::green {

/// Restriction of a Markov system to an interior window D with the chain
/// killed outside.  P_D is substochastic with certified spectral radius
/// < 1, which is the finite rendering of transience: every Green series
/// converges geometrically.
///
/// Functions on the window use local indices 0..|D|-1 in the order of the
/// sorted domain.  Holds a reference to the parent system, which must
/// outlive the window.
class KilledSystem {
  public:
    const markov::MarkovSystem& parent() const { return *parent_; }
    const StateSet& domain() const { return domain_; }
    int window_size() const { return static_cast<int>(domain_.size()); }
    double spectral_radius() const { return spectral_radius_; }

    int local_index(int parent_state) const;   // -1 when outside the window
    int parent_state(int local) const { return domain_[local]; }

    /// nu restricted to the window (parent values).
    Eigen::VectorXd nu_window() const;
    /// mu restricted to the window.
    Eigen::VectorXd mu_window() const;
    /// c restricted to the window (parent conductance, escape included).
    Eigen::VectorXd c_window() const;

    Eigen::VectorXd apply_PD(const Eigen::VectorXd& f_local) const;
    /// Solves (I - P_D) x = b through the SPD system (diag(nu) - W)_DD.
    Eigen::VectorXd solve_I_minus_PD(const Eigen::VectorXd& b_local) const;

    /// chi_A as a local vector; A given in parent states, must lie in D.
    Eigen::VectorXd indicator_local(const StateSet& A) const;

    /// Extends a window function by zero to the parent state space.
    Eigen::VectorXd extend_by_zero(const Eigen::VectorXd& f_local) const;

    /// rho_n of the killed chain: <chi_A, P_D^n chi_B>_{L2(nu_D)}.
    double rho_n_killed(int n, const StateSet& A, const StateSet& B) const;

    friend KilledSystem kill(const markov::MarkovSystem& sys, const StateSet& domain);

  private:
    KilledSystem() = default;
    const markov::MarkovSystem* parent_ = nullptr;
    StateSet domain_;
    std::vector<int> local_;  // parent -> local
    double spectral_radius_ = 0.0;
    Eigen::MatrixXd window_W_;              // W restricted to D x D
    Eigen::VectorXd window_nu_;
    std::shared_ptr<Eigen::LDLT<Eigen::MatrixXd>> factorization_;  // of diag(nu)-W on D
};

/// Certifies the window: D proper and nonempty, every component of D leaks
/// mass to the complement, spectral radius of P_D below 1 - 1e-10.
KilledSystem kill(const markov::MarkovSystem& sys, const StateSet& domain);

struct GreenFunction {
    StateSet target;          // A, parent states
    Eigen::VectorXd values;   // G_A on the window, local indexing
};

/// G_A = (I - P_D)^{-1} chi_A; post-verified against Delta G_A = c chi_A.
GreenFunction green_solve(const KilledSystem& ks, const StateSet& A);

struct SeriesResult {
    GreenFunction green;
    int terms_used;
    double tail_bound;  // certified geometric remainder in the nu-norm
};

/// Partial sums of P_D^n chi_A until the certified tail drops below tol.
SeriesResult green_series(const KilledSystem& ks, const StateSet& A, double tol);

struct EnergyIdentityReport {
    double inner_product;        // <G_A, G_B>_{H_E} over the grounded window form
    double series_sum;           // partial sums of rho_n(A x B) for the killed chain
    double series_tail_bound;
    double inner_residual;       // |inner - sum| beyond the certified tail, scaled
    double pairing_residual;     // max over probes of <f, G_A>_{H_E} vs int_A f dnu
    int terms_used;
};

/// Energy-space identities for Green functions on the killed window; the
/// energy side is evaluated with the parent form on zero-extended
/// functions, which is exactly the grounded window form.
EnergyIdentityReport green_energy_identities(const KilledSystem& ks,
                                             const energy::EnergyForm& parent_form,
                                             const StateSet& A, const StateSet& B, int terms,
                                             int probe_count = 8, std::uint64_t probe_seed = 0);

struct SymmetricPairReport {
    double energy_side;    // <chi_A, G_B>_{H_E}
    double operator_side;  // <chi_A, c (I - P_D) G_B>_{L2(mu)}
    double overlap;        // nu(A cap B)
    double max_residual;
};

SymmetricPairReport symmetric_pair_check(const KilledSystem& ks,
                                         const energy::EnergyForm& parent_form, const StateSet& A,
                                         const StateSet& B);

struct Decomposition {
    Eigen::VectorXd phi;      // on the window (local), in L2(nu)
    Eigen::VectorXd harmonic; // on parent states, harmonic inside the window
    double reconstruction_residual;
};

/// f = G(phi) + h on the window with h the harmonic extension of f's values
/// outside the window.
Decomposition green_decompose(const KilledSystem& ks, const Eigen::VectorXd& f_parent);

}  // namespace symmarkov::green
