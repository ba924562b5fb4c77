#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "symmarkov/errors.hpp"

namespace symmarkov::kernels {

/// Expression tree over the variables x, y.  Nodes are immutable and
/// shared; evaluation is pure.
struct Expr {
    enum class Op {
        Literal, VarX, VarY,
        Add, Sub, Mul, Div, Pow,
        Neg,
        Exp, Log, Abs, Sqrt, Sin, Cos,
        Min, Max,
    };
    Op op;
    double literal = 0.0;
    std::shared_ptr<const Expr> a;
    std::shared_ptr<const Expr> b;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Parses with the usual precedence: ^ (right-assoc, binds tightest),
/// unary minus, then * /, then + -.  Throws ParseError with byte offset
/// and expected-token set, UnknownIdentifierError for stray names.
ExprPtr parse_kernel(std::string_view text);

/// Canonical printer; parse(print(e)) reproduces e node for node.
std::string print_kernel(const ExprPtr& e);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Raw evaluation; may produce NaN/inf (callers decide whether to accept).
double eval_raw(const Expr& e, double x, double y);

// -- quadrature ----------------------------------------------------------------

enum class QuadRule { Midpoint, GaussLegendre };

struct Quadrature {
    QuadRule rule = QuadRule::GaussLegendre;
    int points = 4;  // per cell per axis
};

/// Closed subinterval of [0, 1].
struct Interval {
    double lo;
    double hi;
};

/// Finite union of internally disjoint subintervals of [0, 1].
using IntervalSet = std::vector<Interval>;

/// Nodes and weights of the 1D rule on [lo, hi]; deterministic tables.
void rule_nodes(const Quadrature& q, double lo, double hi, std::vector<double>& nodes,
                std::vector<double>& weights);

// -- kernel specification --------------------------------------------------------

/// A symmetric density on the unit square plus the quadrature policy used
/// to integrate it.  The base measure of the continuous backend is fixed
/// to Lebesgue on [0, 1].
class KernelSpec {
  public:
    static KernelSpec expression(std::string_view text, Quadrature quad = {});
    static KernelSpec from_expr(ExprPtr expr, Quadrature quad = {});
    /// Families: "constant" {value}, "product" {a, b} for (a+bx)(a+by),
    /// "gaussian_diff" {s}, "rank_one_plus_constant" {c, a, b}.
    static KernelSpec builtin(const std::string& family,
                              const std::map<std::string, double>& params, Quadrature quad = {});

    const ExprPtr& expr() const { return expr_; }
    const Quadrature& quadrature() const { return quad_; }
    bool symmetry_checked() const { return symmetry_checked_; }

    /// Checked evaluation: rejects NaN, infinity, and negative values.
    double operator()(double x, double y) const;

    friend struct SymmetryCheckAccess;

  private:
    KernelSpec() = default;
    ExprPtr expr_;
    Quadrature quad_;
    bool symmetry_checked_ = false;
};

struct SymmetryResult {
    bool symmetric;
    // first violation found, meaningful when !symmetric
    double x = 0.0, y = 0.0, k_xy = 0.0, k_yx = 0.0;
};

/// Samples |k(x,y) - k(y,x)| over a deterministic low-discrepancy node set
/// of the given size plus all quadrature node pairs; tolerance
/// 1e-10 (1 + |k|).  Marks the spec checked when it passes.
SymmetryResult check_symmetry(KernelSpec& spec, int samples);
SymmetryResult check_symmetry(const KernelSpec& spec, int samples);

/// Quadrature estimate of the double integral of k over A x B, one rule
/// application per rectangle of the interval partition.
double kernel_rectangle_mass(const KernelSpec& spec, const IntervalSet& A, const IntervalSet& B);

/// Quadrature estimate of the fiber integral over B at height x;
/// fiber_mass(x, [0,1]) is the continuous c(x).
double fiber_mass(const KernelSpec& spec, double x, const IntervalSet& B);

/// Validates endpoints and pairwise disjointness.
void validate_intervals(const IntervalSet& s);

}  // namespace symmarkov::kernels
