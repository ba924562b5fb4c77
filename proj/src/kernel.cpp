#include "symmarkov/kernel.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace symmarkov::kernels {

// ============================================================================
// Parser
// ============================================================================

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    void skip_space() {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t' || text[pos] == '\n' ||
                                     text[pos] == '\r'))
            ++pos;
    }

    bool at_end() {
        skip_space();
        return pos >= text.size();
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool consume(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    ExprPtr make(Expr::Op op, ExprPtr a = nullptr, ExprPtr b = nullptr, double lit = 0.0) {
        auto e = std::make_shared<Expr>();
        e->op = op;
        e->literal = lit;
        e->a = std::move(a);
        e->b = std::move(b);
        return e;
    }

    ExprPtr parse_expression() {
        ExprPtr left = parse_term();
        while (true) {
            if (consume('+'))
                left = make(Expr::Op::Add, left, parse_term());
            else if (consume('-'))
                left = make(Expr::Op::Sub, left, parse_term());
            else
                return left;
        }
    }

    ExprPtr parse_term() {
        ExprPtr left = parse_factor();
        while (true) {
            if (consume('*'))
                left = make(Expr::Op::Mul, left, parse_factor());
            else if (consume('/'))
                left = make(Expr::Op::Div, left, parse_factor());
            else
                return left;
        }
    }

    // unary minus binds looser than ^, so -x^2 is -(x^2)
    ExprPtr parse_factor() {
        if (consume('-')) return make(Expr::Op::Neg, parse_factor());
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (consume('^')) return make(Expr::Op::Pow, base, parse_factor());
        return base;
    }

    ExprPtr parse_atom() {
        skip_space();
        if (pos >= text.size())
            throw ParseError(pos, "a number, 'x', 'y', a function name, '(', or '-'");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            ExprPtr inner = parse_expression();
            if (!consume(')')) throw ParseError(pos, "')'");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number();
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') return parse_name();
        throw ParseError(pos, "a number, 'x', 'y', a function name, '(', or '-'");
    }

    ExprPtr parse_number() {
        const char* begin = text.data() + pos;
        const char* end = text.data() + text.size();
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr == begin) throw ParseError(pos, "a numeric literal");
        pos += static_cast<std::size_t>(ptr - begin);
        return make(Expr::Op::Literal, nullptr, nullptr, value);
    }

    ExprPtr parse_name() {
        std::size_t start = pos;
        while (pos < text.size() &&
               ((text[pos] >= 'a' && text[pos] <= 'z') || (text[pos] >= 'A' && text[pos] <= 'Z') ||
                (text[pos] >= '0' && text[pos] <= '9') || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        if (name == "x") return make(Expr::Op::VarX);
        if (name == "y") return make(Expr::Op::VarY);

        Expr::Op op;
        int arity = 1;
        if (name == "exp") op = Expr::Op::Exp;
        else if (name == "log") op = Expr::Op::Log;
        else if (name == "abs") op = Expr::Op::Abs;
        else if (name == "sqrt") op = Expr::Op::Sqrt;
        else if (name == "sin") op = Expr::Op::Sin;
        else if (name == "cos") op = Expr::Op::Cos;
        else if (name == "min") { op = Expr::Op::Min; arity = 2; }
        else if (name == "max") { op = Expr::Op::Max; arity = 2; }
        else throw UnknownIdentifierError(start, name);

        if (!consume('(')) throw ParseError(pos, "'(' after function name");
        ExprPtr first = parse_expression();
        ExprPtr second;
        if (arity == 2) {
            if (!consume(',')) throw ParseError(pos, "',' between function arguments");
            second = parse_expression();
        }
        if (!consume(')')) throw ParseError(pos, "')'");
        return make(op, first, second);
    }
};

std::string format_literal(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

ExprPtr parse_kernel(std::string_view text) {
    Parser parser{text};
    if (parser.at_end()) throw ParseError(0, "a nonempty expression");
    ExprPtr e = parser.parse_expression();
    if (!parser.at_end()) throw ParseError(parser.pos, "an operator or end of input");
    return e;
}

std::string print_kernel(const ExprPtr& e) {
    switch (e->op) {
        case Expr::Op::Literal: return format_literal(e->literal);
        case Expr::Op::VarX: return "x";
        case Expr::Op::VarY: return "y";
        case Expr::Op::Add: return "(" + print_kernel(e->a) + " + " + print_kernel(e->b) + ")";
        case Expr::Op::Sub: return "(" + print_kernel(e->a) + " - " + print_kernel(e->b) + ")";
        case Expr::Op::Mul: return "(" + print_kernel(e->a) + " * " + print_kernel(e->b) + ")";
        case Expr::Op::Div: return "(" + print_kernel(e->a) + " / " + print_kernel(e->b) + ")";
        case Expr::Op::Pow: return "(" + print_kernel(e->a) + " ^ " + print_kernel(e->b) + ")";
        case Expr::Op::Neg: return "(-" + print_kernel(e->a) + ")";
        case Expr::Op::Exp: return "exp(" + print_kernel(e->a) + ")";
        case Expr::Op::Log: return "log(" + print_kernel(e->a) + ")";
        case Expr::Op::Abs: return "abs(" + print_kernel(e->a) + ")";
        case Expr::Op::Sqrt: return "sqrt(" + print_kernel(e->a) + ")";
        case Expr::Op::Sin: return "sin(" + print_kernel(e->a) + ")";
        case Expr::Op::Cos: return "cos(" + print_kernel(e->a) + ")";
        case Expr::Op::Min: return "min(" + print_kernel(e->a) + ", " + print_kernel(e->b) + ")";
        case Expr::Op::Max: return "max(" + print_kernel(e->a) + ", " + print_kernel(e->b) + ")";
    }
    return "";
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (!a || !b) return !a && !b;
    if (a->op != b->op) return false;
    if (a->op == Expr::Op::Literal) return a->literal == b->literal;
    return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
}

double eval_raw(const Expr& e, double x, double y) {
    switch (e.op) {
        case Expr::Op::Literal: return e.literal;
        case Expr::Op::VarX: return x;
        case Expr::Op::VarY: return y;
        case Expr::Op::Add: return eval_raw(*e.a, x, y) + eval_raw(*e.b, x, y);
        case Expr::Op::Sub: return eval_raw(*e.a, x, y) - eval_raw(*e.b, x, y);
        case Expr::Op::Mul: return eval_raw(*e.a, x, y) * eval_raw(*e.b, x, y);
        case Expr::Op::Div: return eval_raw(*e.a, x, y) / eval_raw(*e.b, x, y);
        case Expr::Op::Pow: return std::pow(eval_raw(*e.a, x, y), eval_raw(*e.b, x, y));
        case Expr::Op::Neg: return -eval_raw(*e.a, x, y);
        case Expr::Op::Exp: return std::exp(eval_raw(*e.a, x, y));
        case Expr::Op::Log: return std::log(eval_raw(*e.a, x, y));
        case Expr::Op::Abs: return std::abs(eval_raw(*e.a, x, y));
        case Expr::Op::Sqrt: return std::sqrt(eval_raw(*e.a, x, y));
        case Expr::Op::Sin: return std::sin(eval_raw(*e.a, x, y));
        case Expr::Op::Cos: return std::cos(eval_raw(*e.a, x, y));
        case Expr::Op::Min: return std::min(eval_raw(*e.a, x, y), eval_raw(*e.b, x, y));
        case Expr::Op::Max: return std::max(eval_raw(*e.a, x, y), eval_raw(*e.b, x, y));
    }
    return 0.0;
}

// ============================================================================
// Quadrature tables
// ============================================================================

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], orders 1..8.
const std::vector<std::vector<double>> kGaussNodes = {
    {0.0},
    {-0.5773502691896257645091488, 0.5773502691896257645091488},
    {-0.7745966692414833770358531, 0.0, 0.7745966692414833770358531},
    {-0.8611363115940525752239465, -0.3399810435848562648026658, 0.3399810435848562648026658,
     0.8611363115940525752239465},
    {-0.9061798459386639927976269, -0.5384693101056830910363144, 0.0,
     0.5384693101056830910363144, 0.9061798459386639927976269},
    {-0.9324695142031520278123016, -0.6612093864662645136613996, -0.2386191860831969086305017,
     0.2386191860831969086305017, 0.6612093864662645136613996, 0.9324695142031520278123016},
    {-0.9491079123427585245261897, -0.7415311855993944398638648, -0.4058451513773971669066064,
     0.0, 0.4058451513773971669066064, 0.7415311855993944398638648, 0.9491079123427585245261897},
    {-0.9602898564975362316835609, -0.7966664774136267395915539, -0.5255324099163289858177390,
     -0.1834346424956498049394761, 0.1834346424956498049394761, 0.5255324099163289858177390,
     0.7966664774136267395915539, 0.9602898564975362316835609},
};

const std::vector<std::vector<double>> kGaussWeights = {
    {2.0},
    {1.0, 1.0},
    {0.5555555555555555555555556, 0.8888888888888888888888889, 0.5555555555555555555555556},
    {0.3478548451374538573730639, 0.6521451548625461426269361, 0.6521451548625461426269361,
     0.3478548451374538573730639},
    {0.2369268850561890875142640, 0.4786286704993664680412915, 0.5688888888888888888888889,
     0.4786286704993664680412915, 0.2369268850561890875142640},
    {0.1713244923791703450402961, 0.3607615730481386075698335, 0.4679139345726910473898703,
     0.4679139345726910473898703, 0.3607615730481386075698335, 0.1713244923791703450402961},
    {0.1294849661688696932706114, 0.2797053914892766679014678, 0.3818300505051189449503698,
     0.4179591836734693877551020, 0.3818300505051189449503698, 0.2797053914892766679014678,
     0.1294849661688696932706114},
    {0.1012285362903762591525314, 0.2223810344533744705443560, 0.3137066458778872873379622,
     0.3626837833783619829651504, 0.3626837833783619829651504, 0.3137066458778872873379622,
     0.2223810344533744705443560, 0.1012285362903762591525314},
};

}  // namespace

void rule_nodes(const Quadrature& q, double lo, double hi, std::vector<double>& nodes,
                std::vector<double>& weights) {
    nodes.clear();
    weights.clear();
    const double h = hi - lo;
    if (q.rule == QuadRule::Midpoint) {
        if (q.points < 1 || q.points > 64) throw Error("midpoint rule needs 1..64 points");
        double step = h / q.points;
        for (int k = 0; k < q.points; ++k) {
            nodes.push_back(lo + (k + 0.5) * step);
            weights.push_back(step);
        }
    } else {
        if (q.points < 1 || q.points > 8)
            throw Error("gauss-legendre tables cover 1..8 points per cell");
        const auto& xs = kGaussNodes[static_cast<std::size_t>(q.points) - 1];
        const auto& ws = kGaussWeights[static_cast<std::size_t>(q.points) - 1];
        for (int k = 0; k < q.points; ++k) {
            nodes.push_back(lo + 0.5 * h * (xs[k] + 1.0));
            weights.push_back(0.5 * h * ws[k]);
        }
    }
}

// ============================================================================
// KernelSpec
// ============================================================================

KernelSpec KernelSpec::expression(std::string_view text, Quadrature quad) {
    return from_expr(parse_kernel(text), quad);
}

KernelSpec KernelSpec::from_expr(ExprPtr expr, Quadrature quad) {
    KernelSpec spec;
    spec.expr_ = std::move(expr);
    spec.quad_ = quad;
    std::vector<double> probe_nodes, probe_weights;
    rule_nodes(quad, 0.0, 1.0, probe_nodes, probe_weights);  // validates the rule
    return spec;
}

KernelSpec KernelSpec::builtin(const std::string& family,
                               const std::map<std::string, double>& params, Quadrature quad) {
    auto need = [&](const char* key) {
        auto it = params.find(key);
        if (it == params.end())
            throw Error("builtin '" + family + "' needs parameter '" + key + "'");
        return it->second;
    };
    auto lit = [](double v) {
        return v < 0.0 ? "(" + format_literal(v) + ")" : format_literal(v);
    };
    std::string text;
    if (family == "constant") {
        text = lit(need("value"));
    } else if (family == "product") {
        std::string q = "(" + lit(need("a")) + " + " + lit(need("b")) + "*";
        text = q + "x)" + " * " + q + "y)";
    } else if (family == "gaussian_diff") {
        text = "exp(-" + lit(need("s")) + "*(x-y)^2)";
    } else if (family == "rank_one_plus_constant") {
        std::string q = "(" + lit(need("a")) + " + " + lit(need("b")) + "*";
        text = lit(need("c")) + " + " + q + "x)" + " * " + q + "y)";
    } else {
        throw Error("unknown builtin kernel family '" + family + "'");
    }
    return expression(text, quad);
}

double KernelSpec::operator()(double x, double y) const {
    double v = eval_raw(*expr_, x, y);
    if (!std::isfinite(v)) throw EvaluationError("kernel evaluated to a non-finite value", x, y);
    if (v < 0.0) throw EvaluationError("kernel evaluated to a negative value", x, y);
    return v;
}

struct SymmetryCheckAccess {
    static void mark(KernelSpec& spec) { spec.symmetry_checked_ = true; }
};

SymmetryResult check_symmetry(const KernelSpec& spec, int samples) {
    std::vector<std::pair<double, double>> points;
    // R2 low-discrepancy sequence over the square.
    const double a1 = 0.7548776662466927600495088;
    const double a2 = 0.5698402909980532659114181;
    double u = 0.5, v = 0.5;
    for (int k = 0; k < samples; ++k) {
        u += a1; u -= std::floor(u);
        v += a2; v -= std::floor(v);
        points.emplace_back(u, v);
    }
    std::vector<double> nodes, weights;
    rule_nodes(spec.quadrature(), 0.0, 1.0, nodes, weights);
    for (double nx : nodes)
        for (double ny : nodes) points.emplace_back(nx, ny);

    for (const auto& [x, y] : points) {
        double k_xy = spec(x, y);
        double k_yx = spec(y, x);
        if (std::abs(k_xy - k_yx) > 1e-10 * (1.0 + std::abs(k_xy)))
            return {false, x, y, k_xy, k_yx};
    }
    return {true};
}

SymmetryResult check_symmetry(KernelSpec& spec, int samples) {
    SymmetryResult result = check_symmetry(static_cast<const KernelSpec&>(spec), samples);
    if (result.symmetric) SymmetryCheckAccess::mark(spec);
    return result;
}

// ============================================================================
// Rectangle and fiber masses
// ============================================================================

void validate_intervals(const IntervalSet& s) {
    for (const Interval& iv : s) {
        if (!(iv.lo <= iv.hi) || iv.lo < 0.0 || iv.hi > 1.0)
            throw Error("interval [" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                        "] is not inside [0, 1]");
    }
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b) {
            double overlap = std::min(s[a].hi, s[b].hi) - std::max(s[a].lo, s[b].lo);
            if (overlap > 0.0) throw Error("intervals of a union must be internally disjoint");
        }
}

double kernel_rectangle_mass(const KernelSpec& spec, const IntervalSet& A, const IntervalSet& B) {
    validate_intervals(A);
    validate_intervals(B);
    std::vector<double> xs, wx, ys, wy;
    double total = 0.0;
    for (const Interval& ia : A) {
        if (ia.hi <= ia.lo) continue;
        rule_nodes(spec.quadrature(), ia.lo, ia.hi, xs, wx);
        for (const Interval& ib : B) {
            if (ib.hi <= ib.lo) continue;
            rule_nodes(spec.quadrature(), ib.lo, ib.hi, ys, wy);
            double cell = 0.0;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < ys.size(); ++j) row += wy[j] * spec(xs[i], ys[j]);
                cell += wx[i] * row;
            }
            total += cell;
        }
    }
    return total;
}

double fiber_mass(const KernelSpec& spec, double x, const IntervalSet& B) {
    if (x < 0.0 || x > 1.0) throw Error("fiber point must lie in [0, 1]");
    validate_intervals(B);
    std::vector<double> ys, wy;
    double total = 0.0;
    for (const Interval& ib : B) {
        if (ib.hi <= ib.lo) continue;
        rule_nodes(spec.quadrature(), ib.lo, ib.hi, ys, wy);
        for (std::size_t j = 0; j < ys.size(); ++j) total += wy[j] * spec(x, ys[j]);
    }
    return total;
}

}  // namespace symmarkov::kernels
