#include "symmarkov/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <deque>
#include <map>

#include "symmarkov/util.hpp"

namespace symmarkov {

namespace {

void require_finite_weight(double w, int i, int j) {
    if (!std::isfinite(w) || w < 0.0)
        throw Error("weight for pair (" + std::to_string(i) + "," + std::to_string(j) +
                    ") must be finite and nonnegative, got " + std::to_string(w));
}

StateSet checked_set(const FiniteSymmetricMeasure& m, const StateSet& A) {
    StateSet s = A;
    for (int i : s) m.check_index(i);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace

FiniteSymmetricMeasure FiniteSymmetricMeasure::build(std::vector<double> mu,
                                                     const std::vector<Triplet>& entries,
                                                     bool allow_diagonal) {
    FiniteSymmetricMeasure m;
    m.n_ = static_cast<int>(mu.size());
    if (m.n_ < 1) throw Error("state count must be >= 1");
    m.mu_ = Eigen::Map<Eigen::VectorXd>(mu.data(), static_cast<long>(mu.size()));
    m.allow_diagonal_ = allow_diagonal;
    m.symmetric_ = true;

    // One slot per unordered pair; a second listing must mirror the first
    // with the exact same weight, anything else is a modeling error.
    std::map<std::pair<int, int>, std::pair<double, int>> slots;  // value, times seen
    for (const Triplet& t : entries) {
        m.check_index(t.i);
        m.check_index(t.j);
        require_finite_weight(t.w, t.i, t.j);
        if (t.i == t.j && !allow_diagonal)
            throw Error("diagonal weight at state " + std::to_string(t.i) +
                        " requires allow_diagonal");
        auto key = std::minmax(t.i, t.j);
        auto [it, inserted] = slots.try_emplace(key, t.w, 1);
        if (!inserted) {
            if (it->second.second >= 2)
                throw AsymmetryError("pair (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + ") listed more than twice");
            if (it->second.first != t.w)
                throw AsymmetryError("pair (" + std::to_string(key.first) + "," +
                                     std::to_string(key.second) + ") given with unequal weights " +
                                     std::to_string(it->second.first) + " and " +
                                     std::to_string(t.w));
            it->second.second += 1;
        }
    }

    m.triplets_.reserve(slots.size());
    for (const auto& [key, vw] : slots)
        if (vw.first > 0.0) m.triplets_.push_back({key.first, key.second, vw.first});

    for (const Triplet& t : m.triplets_) {
        m.directed_.push_back({t.i, t.j, t.w});
        if (t.i != t.j) m.directed_.push_back({t.j, t.i, t.w});
    }
    m.finalize();
    return m;
}

FiniteSymmetricMeasure FiniteSymmetricMeasure::build_unchecked(std::vector<double> mu,
                                                               const Eigen::MatrixXd& W,
                                                               bool allow_diagonal) {
    FiniteSymmetricMeasure m;
    m.n_ = static_cast<int>(mu.size());
    if (m.n_ < 1) throw Error("state count must be >= 1");
    if (W.rows() != m.n_ || W.cols() != m.n_)
        throw DimensionError("weight matrix must be n x n");
    m.mu_ = Eigen::Map<Eigen::VectorXd>(mu.data(), static_cast<long>(mu.size()));
    m.allow_diagonal_ = allow_diagonal;
    m.symmetric_ = true;
    for (int i = 0; i < m.n_; ++i)
        for (int j = 0; j < m.n_; ++j) {
            double w = W(i, j);
            require_finite_weight(w, i, j);
            if (w > 0.0) {
                m.directed_.push_back({i, j, w});
                if (W(i, j) != W(j, i)) m.symmetric_ = false;
                if (i <= j) m.triplets_.push_back({i, j, w});
            }
        }
    m.finalize();
    return m;
}

void FiniteSymmetricMeasure::finalize() {
    for (int i = 0; i < n_; ++i)
        if (!(mu_[i] > 0.0) || !std::isfinite(mu_[i]))
            throw NonpositiveBaseError("mu[" + std::to_string(i) + "] = " + std::to_string(mu_[i]) +
                                       " must be strictly positive");

    std::stable_sort(directed_.begin(), directed_.end(), [](const Triplet& a, const Triplet& b) {
        return a.i != b.i ? a.i < b.i : a.j < b.j;
    });
    row_ptr_.assign(static_cast<std::size_t>(n_) + 1, 0);
    col_.reserve(directed_.size());
    val_.reserve(directed_.size());
    for (const Triplet& t : directed_) row_ptr_[static_cast<std::size_t>(t.i) + 1]++;
    for (int i = 0; i < n_; ++i) row_ptr_[static_cast<std::size_t>(i) + 1] += row_ptr_[i];
    for (const Triplet& t : directed_) {
        col_.push_back(t.j);
        val_.push_back(t.w);
    }

    nu_.setZero(n_);
    total_mass_ = 0.0;
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k) s += val_[k];
        nu_[i] = s;
        total_mass_ += s;
        if (!(s > 0.0))
            throw ZeroFiberError("state " + std::to_string(i) +
                                 " has zero fiber mass (empty row in W)");
    }
    c_ = nu_.cwiseQuotient(mu_);
}

double FiniteSymmetricMeasure::weight(int i, int j) const {
    check_index(i);
    check_index(j);
    for (int k = row_ptr_[i]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
        if (col_[k] == j) return val_[k];
    return 0.0;
}

FiniteSymmetricMeasure::Row FiniteSymmetricMeasure::row(int i) const {
    check_index(i);
    int begin = row_ptr_[i];
    int end = row_ptr_[static_cast<std::size_t>(i) + 1];
    return Row{col_.data() + begin, val_.data() + begin, end - begin};
}

Eigen::VectorXd FiniteSymmetricMeasure::apply_W(const Eigen::VectorXd& f) const {
    if (f.size() != n_) throw DimensionError("function length does not match state count");
    Eigen::VectorXd out(n_);
    for (int i = 0; i < n_; ++i) {
        double s = 0.0;
        for (int k = row_ptr_[i]; k < row_ptr_[static_cast<std::size_t>(i) + 1]; ++k)
            s += val_[k] * f[col_[k]];
        out[i] = s;
    }
    return out;
}

Eigen::MatrixXd FiniteSymmetricMeasure::dense() const {
    Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n_, n_);
    for (const Triplet& t : directed_) W(t.i, t.j) = t.w;
    return W;
}

std::string FiniteSymmetricMeasure::digest() const {
    util::Sha256 h;
    auto put_u64 = [&h](std::uint64_t v) {
        unsigned char b[8];
        for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
        h.update(b, 8);
    };
    auto put_double = [&](double d) {
        std::uint64_t bits;
        std::memcpy(&bits, &d, 8);
        put_u64(bits);
    };
    put_u64(static_cast<std::uint64_t>(n_));
    put_u64(allow_diagonal_ ? 1 : 0);
    for (int i = 0; i < n_; ++i) put_double(mu_[i]);
    for (const Triplet& t : directed_) {
        put_u64(static_cast<std::uint64_t>(t.i));
        put_u64(static_cast<std::uint64_t>(t.j));
        put_double(t.w);
    }
    return util::hex(h.digest());
}

DerivedMeasures derive(const FiniteSymmetricMeasure& m) { return DerivedMeasures{m.c(), m.nu()}; }

SupportGraph::SupportGraph(const FiniteSymmetricMeasure& m, double edge_tolerance) {
    int n = m.size();
    adjacency_.resize(n);
    for (int i = 0; i < n; ++i) {
        auto row = m.row(i);
        for (int k = 0; k < row.size; ++k)
            if (row.weights[k] > edge_tolerance && row.cols[k] != i)
                adjacency_[i].push_back(row.cols[k]);
    }
    component_.assign(n, -1);
    component_count_ = 0;
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        if (component_[s] != -1) continue;
        int label = component_count_++;
        component_[s] = label;
        queue.push_back(s);
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adjacency_[v])
                if (component_[w] == -1) {
                    component_[w] = label;
                    queue.push_back(w);
                }
        }
    }
}

StateSet SupportGraph::component_members(int label) const {
    StateSet out;
    for (int i = 0; i < static_cast<int>(component_.size()); ++i)
        if (component_[i] == label) out.push_back(i);
    return out;
}

double rectangle_mass(const FiniteSymmetricMeasure& m, const StateSet& A, const StateSet& B) {
    StateSet a = checked_set(m, A);
    StateSet b = checked_set(m, B);
    std::vector<char> in_a(static_cast<std::size_t>(m.size()), 0);
    std::vector<char> in_b(static_cast<std::size_t>(m.size()), 0);
    for (int i : a) in_a[i] = 1;
    for (int j : b) in_b[j] = 1;
    double mass = 0.0;
    if (m.symmetric()) {
        // Sum over canonical unordered pairs with a swap-invariant
        // multiplicity, so rho(A x B) and rho(B x A) are the same
        // floating-point sum.
        for (const Triplet& t : m.triplets()) {
            int count = t.i == t.j
                            ? (in_a[t.i] && in_b[t.i] ? 1 : 0)
                            : (in_a[t.i] && in_b[t.j] ? 1 : 0) + (in_a[t.j] && in_b[t.i] ? 1 : 0);
            if (count == 1) mass += t.w;
            else if (count == 2) mass += 2.0 * t.w;
        }
        return mass;
    }
    // Asymmetric (force-ingested) measures: plain row iteration.
    for (int i : a) {
        auto row = m.row(i);
        for (int k = 0; k < row.size; ++k)
            if (in_b[row.cols[k]]) mass += row.weights[k];
    }
    return mass;
}

double rho_n_mass(const FiniteSymmetricMeasure& m, int n, const StateSet& A, const StateSet& B) {
    if (n < 0) throw Error("step count must be >= 0");
    StateSet a = checked_set(m, A);
    StateSet b = checked_set(m, B);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m.size());
    for (int j : b) v[j] = 1.0;
    for (int step = 0; step < n; ++step)
        v = m.apply_W(v).cwiseQuotient(m.nu());  // one application of P
    double mass = 0.0;
    for (int i : a) mass += m.nu()[i] * v[i];
    return mass;
}

FiniteSymmetricMeasure symmetrize(const Eigen::MatrixXd& rho_raw, std::vector<double> mu,
                                  bool allow_diagonal) {
    if (rho_raw.rows() != rho_raw.cols()) throw DimensionError("raw measure matrix must be square");
    if (static_cast<long>(mu.size()) != rho_raw.rows())
        throw DimensionError("mu length must match matrix size");
    for (long i = 0; i < rho_raw.rows(); ++i)
        for (long j = 0; j < rho_raw.cols(); ++j)
            require_finite_weight(rho_raw(i, j), static_cast<int>(i), static_cast<int>(j));
    Eigen::MatrixXd sym = 0.5 * (rho_raw + rho_raw.transpose());
    std::vector<Triplet> entries;
    for (long i = 0; i < sym.rows(); ++i)
        for (long j = i; j < sym.cols(); ++j)
            if (sym(i, j) > 0.0)
                entries.push_back({static_cast<int>(i), static_cast<int>(j), sym(i, j)});
    return FiniteSymmetricMeasure::build(std::move(mu), entries, allow_diagonal);
}

IrreducibilityResult analyze_irreducibility(const FiniteSymmetricMeasure& m,
                                            double edge_tolerance) {
    SupportGraph graph(m, edge_tolerance);
    if (graph.component_count() <= 1) return {true, {}};
    return {false, graph.component_members(0)};
}

Attainability attainable(const FiniteSymmetricMeasure& m, int x, const StateSet& B) {
    m.check_index(x);
    StateSet b = checked_set(m, B);
    if (b.empty()) throw EmptyTargetError("target set B is empty");
    std::vector<char> in_b(static_cast<std::size_t>(m.size()), 0);
    for (int j : b) in_b[j] = 1;

    // A_n(x): states reachable by a walk of exactly n steps.  Walk-length
    // sets are eventually periodic with period <= 2, so 2n+2 iterations
    // decide reachability.
    std::vector<char> current(static_cast<std::size_t>(m.size()), 0);
    current[x] = 1;
    int limit = 2 * m.size() + 2;
    for (int n = 1; n <= limit; ++n) {
        std::vector<char> next(static_cast<std::size_t>(m.size()), 0);
        for (int i = 0; i < m.size(); ++i) {
            if (!current[i]) continue;
            auto row = m.row(i);
            for (int k = 0; k < row.size; ++k)
                if (row.weights[k] > 0.0) next[row.cols[k]] = 1;
        }
        for (int j = 0; j < m.size(); ++j)
            if (next[j] && in_b[j]) return {true, n};
        current.swap(next);
    }
    return {false, 0};
}

}  // namespace symmarkov
