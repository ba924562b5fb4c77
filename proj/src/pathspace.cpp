#include "symmarkov/pathspace.hpp"

#include <algorithm>
#include <cmath>

#include "symmarkov/rng.hpp"
#include "symmarkov/util.hpp"

namespace symmarkov::paths {

namespace {

/// Cumulative row distributions for inverse-CDF stepping.  The last
/// positive entry absorbs the floating-point residue of the row sum.
struct RowCdf {
    std::vector<int> offsets;
    std::vector<int> states;
    std::vector<double> cum;

    explicit RowCdf(const markov::MarkovSystem& sys) {
        const int n = sys.size();
        offsets.assign(static_cast<std::size_t>(n) + 1, 0);
        for (int i = 0; i < n; ++i) {
            auto row = sys.measure().row(i);
            int positive = 0;
            for (int k = 0; k < row.size; ++k)
                if (row.weights[k] > 0.0) positive++;
            offsets[static_cast<std::size_t>(i) + 1] = offsets[i] + positive;
        }
        states.resize(offsets.back());
        cum.resize(offsets.back());
        for (int i = 0; i < n; ++i) {
            auto row = sys.measure().row(i);
            int at = offsets[i];
            double acc = 0.0;
            for (int k = 0; k < row.size; ++k) {
                if (row.weights[k] <= 0.0) continue;
                acc += row.weights[k] / sys.nu()[i];
                states[at] = row.cols[k];
                cum[at] = acc;
                ++at;
            }
            cum[at - 1] = 1.0;
        }
    }

    int draw(int from, double u) const {
        int lo = offsets[from];
        int hi = offsets[static_cast<std::size_t>(from) + 1];
        auto it = std::upper_bound(cum.begin() + lo, cum.begin() + hi, u);
        int idx = static_cast<int>(it - cum.begin());
        if (idx >= hi) idx = hi - 1;
        return states[idx];
    }
};

StateSet dedup(StateSet s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

}  // namespace

PathEnsemble sample_paths(const markov::MarkovSystem& sys, const StartLaw& start, int horizon,
                          long count, std::uint64_t seed) {
    if (count < 1) throw Error("path count must be >= 1");
    if (horizon < 0) throw Error("horizon must be >= 0");

    PathEnsemble ens;
    ens.seed = seed;
    ens.start = start;
    ens.horizon = horizon;
    ens.system_digest = sys.measure().digest();
    ens.paths.resize(count, horizon + 1);

    // Start-law inverse CDF.
    std::vector<int> start_states;
    std::vector<double> start_cum;
    if (start.kind == StartLaw::Kind::Point) {
        sys.measure().check_index(start.point);
        start_states = {start.point};
        start_cum = {1.0};
    } else {
        StateSet A = dedup(start.set);
        double total = 0.0;
        for (int s : A) {
            sys.measure().check_index(s);
            total += sys.nu()[s];
        }
        if (A.empty() || !(total > 0.0)) throw EmptyStartError("start set carries no nu-mass");
        double acc = 0.0;
        for (int s : A) {
            acc += sys.nu()[s] / total;
            start_states.push_back(s);
            start_cum.push_back(acc);
        }
        start_cum.back() = 1.0;
    }

    RowCdf rows(sys);
    auto sample_block = [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            // counter 0 draws the start, counter k the k-th transition
            double u0 = rng::uniform(seed, p, 0);
            int state = start_states.back();
            for (std::size_t k = 0; k < start_states.size(); ++k)
                if (u0 < start_cum[k]) {
                    state = start_states[k];
                    break;
                }
            ens.paths(static_cast<long>(p), 0) = state;
            for (int step = 1; step <= horizon; ++step) {
                double u = rng::uniform(seed, p, static_cast<std::uint64_t>(step));
                state = rows.draw(state, u);
                ens.paths(static_cast<long>(p), step) = state;
            }
        }
    };
    util::parallel_blocks(static_cast<std::size_t>(count), util::thread_cap(), sample_block);
    return ens;
}

LambdaEstimate estimate_lambda_event(const markov::MarkovSystem& sys, const PathEnsemble& ens,
                                     const StateSet& A, const StateSet& B, int n) {
    if (n > ens.horizon) throw HorizonExceededError("event step exceeds the ensemble horizon");
    if (n < 0) throw Error("event step must be >= 0");
    if (ens.start.kind != StartLaw::Kind::RestrictedNu || dedup(ens.start.set) != dedup(A))
        throw Error("ensemble start law is not nu restricted to the queried set A");

    std::vector<char> in_b(static_cast<std::size_t>(sys.size()), 0);
    for (int s : dedup(B)) {
        sys.measure().check_index(s);
        in_b[s] = 1;
    }
    LambdaEstimate est;
    est.nu_A = 0.0;
    for (int s : dedup(A)) est.nu_A += sys.nu()[s];
    est.count = ens.count();
    est.hits = 0;
    for (long p = 0; p < ens.count(); ++p)
        if (in_b[ens.paths(p, n)]) est.hits++;
    double frac = static_cast<double>(est.hits) / static_cast<double>(est.count);
    est.estimate = est.nu_A * frac;
    est.std_error = est.nu_A * std::sqrt(frac * (1.0 - frac) / static_cast<double>(est.count));
    return est;
}

double check_distribution_reversal(const markov::MarkovSystem& sys, const StateSet& A0,
                                   const StateSet& A1) {
    Eigen::VectorXd chi0 = Eigen::VectorXd::Zero(sys.size());
    Eigen::VectorXd chi1 = Eigen::VectorXd::Zero(sys.size());
    for (int s : dedup(A0)) {
        sys.measure().check_index(s);
        chi0[s] = 1.0;
    }
    for (int s : dedup(A1)) {
        sys.measure().check_index(s);
        chi1[s] = 1.0;
    }
    double forward = markov::inner_nu(sys, chi0, sys.apply_P(chi1));
    double backward = markov::inner_nu(sys, chi1, sys.apply_P(chi0));
    return std::abs(forward - backward) / (1.0 + std::max(std::abs(forward), std::abs(backward)));
}

MartingaleReport martingale_diagnostic(const markov::MarkovSystem& sys, const Eigen::VectorXd& h,
                                       const PathEnsemble& ens, const StateSet& harmonic_states,
                                       double tol) {
    if (h.size() != sys.size()) throw DimensionError("function length mismatch");
    std::vector<char> in_region(static_cast<std::size_t>(sys.size()), 0);
    if (harmonic_states.empty()) {
        std::fill(in_region.begin(), in_region.end(), 1);
    } else {
        for (int s : dedup(harmonic_states)) {
            sys.measure().check_index(s);
            in_region[s] = 1;
        }
    }

    MartingaleReport report;
    Eigen::VectorXd ph = sys.apply_P(h);
    report.max_exact_residual = 0.0;
    for (int i = 0; i < sys.size(); ++i)
        if (in_region[i])
            report.max_exact_residual =
                std::max(report.max_exact_residual, std::abs(ph[i] - h[i]));
    report.exact_pass = report.max_exact_residual <= tol * (1.0 + h.cwiseAbs().maxCoeff());

    // Empirical drift over steps launched from inside the region; paths are
    // censored at first exit.
    double sum = 0.0, sum_sq = 0.0;
    long steps = 0;
    for (long p = 0; p < ens.count(); ++p) {
        for (int k = 0; k < ens.horizon; ++k) {
            int from = ens.paths(p, k);
            if (!in_region[from]) break;
            double inc = h[ens.paths(p, k + 1)] - h[from];
            sum += inc;
            sum_sq += inc * inc;
            ++steps;
        }
    }
    report.counted_steps = steps;
    if (steps > 1) {
        report.empirical_drift = sum / static_cast<double>(steps);
        double var = (sum_sq - sum * sum / static_cast<double>(steps)) /
                     (static_cast<double>(steps) - 1.0);
        report.drift_std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(steps));
    } else {
        report.empirical_drift = 0.0;
        report.drift_std_error = 0.0;
    }
    report.empirical_pass =
        std::abs(report.empirical_drift) <=
        3.0 * report.drift_std_error + tol * (1.0 + h.cwiseAbs().maxCoeff());
    return report;
}

}  // namespace symmarkov::paths
