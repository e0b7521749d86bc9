#pragma once

// Exact expected trace moments for jointly-Gaussian ensembles via the Wick
// pairing formula, Monte Carlo trace moments for every ensemble, and the
// fourth-moment fluctuation scaling scan.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "ew/ensemble.hpp"
#include "ew/errors.hpp"
#include "ew/parallel.hpp"
#include "ew/partitions.hpp"
#include "ew/process.hpp"
#include "ew/spectra.hpp"

namespace ew {

// Matrix entry label a(p,q), stored with p <= q so that a(p,q) = a(q,p) is
// resolved before any covariance lookup.
struct EntryLabel {
    unsigned p = 1;
    unsigned q = 1;

    EntryLabel() = default;
    EntryLabel(unsigned p_, unsigned q_) : p(std::min(p_, q_)), q(std::max(p_, q_)) {}

    unsigned offset() const { return q - p; }
    bool operator==(const EntryLabel&) const = default;
};

// Cov(a(p,q), a(p',q')): zero across distinct diagonals, otherwise the
// process autocovariance at the positional shift along the diagonal.
struct EntryCovariance {
    ProcessSpec spec;

    explicit EntryCovariance(const ProcessSpec& s) : spec(s) { validate(spec); }

    double operator()(const EntryLabel& a, const EntryLabel& b) const {
        if (a.offset() != b.offset()) return 0.0;
        const unsigned t = a.p > b.p ? a.p - b.p : b.p - a.p;
        return theoretical_covariance(spec, t);
    }
};

// E[a(L_1) ... a(L_k)] for centered jointly Gaussian entries: sum over all
// pairings of {1..k} of the product of pairwise covariances; 0 for odd k.
inline double wick_product_expectation(const std::vector<EntryLabel>& labels,
                                       const EntryCovariance& cov) {
    if (!is_gaussian(cov.spec))
        throw unsupported_oracle_error("wick_product_expectation: non-Gaussian process");
    const auto k = labels.size();
    if (k % 2 != 0) return 0.0;
    if (k == 0) return 1.0;
    std::vector<bool> used(k, false);
    const std::function<double()> rec = [&]() -> double {
        std::size_t lo = k;
        for (std::size_t i = 0; i < k; ++i)
            if (!used[i]) { lo = i; break; }
        if (lo == k) return 1.0;
        used[lo] = true;
        double acc = 0.0;
        for (std::size_t j = lo + 1; j < k; ++j) {
            if (used[j]) continue;
            const double c = cov(labels[lo], labels[j]);
            if (c != 0.0) {
                used[j] = true;
                acc += c * rec();
                used[j] = false;
            }
        }
        used[lo] = false;
        return acc;
    };
    return rec();
}

// Budget for the exact oracle; 64^4 consistent tuples fit.
inline constexpr std::uint64_t kOracleBudget = 20'000'000;

// Exact (1/n) E[tr X_n^k] by summing the Wick expectation over every
// consistent k-tuple and dividing by n^{k/2}.
inline double expected_trace_moment(unsigned n, unsigned k, const ProcessSpec& spec) {
    validate(spec);
    if (!is_gaussian(spec))
        throw unsupported_oracle_error("expected_trace_moment: non-Gaussian process");
    if (k % 2 != 0) return 0.0;  // Wick sum over an odd ground set is empty
    const EntryCovariance cov(spec);
    std::vector<EntryLabel> labels(k);
    double acc = 0.0;
    for_each_consistent(
        n, k,
        [&](const std::vector<unsigned>& p) {
            for (unsigned j = 0; j < k; ++j) labels[j] = EntryLabel(p[j], p[(j + 1) % k]);
            acc += wick_product_expectation(labels, cov);
        },
        kOracleBudget);
    return acc / std::pow(static_cast<double>(n), 1.0 + k / 2.0);
}

// Sum over S_n*(pi) of |E[a(P_1)...a(P_k)]| (or the signed sum), the
// per-partition contribution the crossing/non-crossing dichotomy is about.
inline double star_expectation_sum(unsigned n, const PairPartition& pi,
                                   const ProcessSpec& spec, bool absolute = false,
                                   std::uint64_t budget = kOracleBudget) {
    if (!pi.is_pair_partition())
        throw domain_error("star_expectation_sum: not a pair partition");
    const EntryCovariance cov(spec);
    const unsigned k = pi.k;
    std::vector<EntryLabel> labels(k);
    std::vector<unsigned> gaps;
    double acc = 0.0;
    for_each_consistent(
        n, k,
        [&](const std::vector<unsigned>& p) {
            if (!detail::gap_classes_match(p, n, pi.class_of, gaps)) return;
            if (!detail::is_star(p, pi)) return;
            for (unsigned j = 0; j < k; ++j) labels[j] = EntryLabel(p[j], p[(j + 1) % k]);
            const double e = wick_product_expectation(labels, cov);
            acc += absolute ? std::abs(e) : e;
        },
        budget);
    return acc;
}

struct MomentReport {
    unsigned n = 0;
    unsigned k = 0;
    ProcessSpec spec;
    std::optional<double> exact;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    std::size_t trials = 0;
    double semicircle_target = 0.0;
};

inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) {
    return mix64(mix64(base_seed) ^ (0xd1b54a32d192ed03ULL * (trial + 1)));
}

inline std::pair<double, double> mean_and_stderr(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    if (xs.size() < 2) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

// Monte Carlo estimate of the k-th ESD moment over independent trials.
inline MomentReport mc_trace_moment(unsigned n, unsigned k, const ProcessSpec& spec,
                                    std::size_t trials, std::uint64_t base_seed,
                                    unsigned threads = 1) {
    validate(spec);
    if (trials < 2) throw domain_error("mc_trace_moment: trials must be >= 2");
    const auto samples = parallel_map(trials, threads, [&](std::size_t trial) {
        EnsembleConfig config{n, spec, {}, trial_seed(base_seed, trial)};
        return esd_moment(eigenvalues(build_matrix(config)), k);
    });
    MomentReport report;
    report.n = n;
    report.k = k;
    report.spec = spec;
    report.trials = trials;
    report.semicircle_target = semicircle_moment(k);
    std::tie(report.mc_mean, report.mc_stderr) = mean_and_stderr(samples);
    if (is_gaussian(spec)) {
        std::uint64_t nk = 1;
        bool in_budget = true;
        for (unsigned i = 0; i < k && in_budget; ++i) {
            if (nk > kOracleBudget / n) in_budget = false;
            else nk *= n;
        }
        if (in_budget) report.exact = expected_trace_moment(n, k, spec);
    }
    return report;
}

// tr(X^k) by direct matrix powering.
inline double trace_power(const Matrix& x, unsigned k) {
    if (k == 0) return static_cast<double>(x.rows());
    if (k == 1) return x.trace();
    const unsigned a = k / 2;
    Matrix pa = x;
    for (unsigned i = 1; i < a; ++i) pa = pa * x;
    if (k % 2 == 0) return pa.squaredNorm();  // symmetric: tr(A A^T) = tr(A^2)
    const Matrix pb = pa * x;
    return pa.cwiseProduct(pb).sum();
}

struct FluctuationReport {
    std::vector<unsigned> n_grid;
    std::vector<double> a4_estimates;
    unsigned k = 0;
    ProcessSpec spec;
    std::size_t trials = 0;
    double slope = 0.0;
    double slope_ci_lo = 0.0;
    double slope_ci_hi = 0.0;
};

inline double fourth_central_moment(const std::vector<double>& xs) {
    const auto n = static_cast<double>(xs.size());
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= n;
    double acc = 0.0;
    for (double x : xs) {
        const double d = x - mean;
        acc += d * d * d * d;
    }
    return acc / n;
}

inline double loglog_slope(const std::vector<unsigned>& ns, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double m = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (ys[i] <= 0.0) continue;
        const double lx = std::log(static_cast<double>(ns[i]));
        const double ly = std::log(ys[i]);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        m += 1.0;
    }
    if (m < 2.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// Monte Carlo estimate of A_4 = E[(tr X^k - E tr X^k)^4] on an n-grid, with
// a least-squares log-log slope and a bootstrap confidence interval.
inline FluctuationReport fluctuation_scan(const ProcessSpec& spec, unsigned k,
                                          const std::vector<unsigned>& n_grid,
                                          std::size_t trials, std::uint64_t base_seed,
                                          unsigned threads = 1,
                                          std::size_t bootstrap_reps = 200) {
    validate(spec);
    if (n_grid.size() < 2) throw domain_error("fluctuation_scan: need at least two grid points");
    if (trials < 100) throw domain_error("fluctuation_scan: trials must be >= 100");

    FluctuationReport report;
    report.n_grid = n_grid;
    report.k = k;
    report.spec = spec;
    report.trials = trials;

    std::vector<std::vector<double>> samples;
    for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
        const unsigned n = n_grid[gi];
        samples.push_back(parallel_map(trials, threads, [&](std::size_t trial) {
            EnsembleConfig config{n, spec, {},
                                  trial_seed(mix64(base_seed) + gi, trial)};
            return trace_power(build_matrix(config), k);
        }));
        report.a4_estimates.push_back(fourth_central_moment(samples.back()));
    }
    report.slope = loglog_slope(n_grid, report.a4_estimates);

    std::mt19937_64 rng(trial_seed(base_seed, 0x626f6f74));
    std::uniform_int_distribution<std::size_t> pick(0, trials - 1);
    std::vector<double> slopes;
    std::vector<double> resampled(trials);
    std::vector<double> a4(n_grid.size());
    for (std::size_t rep = 0; rep < bootstrap_reps; ++rep) {
        for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
            for (std::size_t t = 0; t < trials; ++t) resampled[t] = samples[gi][pick(rng)];
            a4[gi] = fourth_central_moment(resampled);
        }
        const double s = loglog_slope(n_grid, a4);
        if (std::isfinite(s)) slopes.push_back(s);
    }
    if (!slopes.empty()) {
        std::sort(slopes.begin(), slopes.end());
        report.slope_ci_lo = slopes[static_cast<std::size_t>(0.025 * (slopes.size() - 1))];
        report.slope_ci_hi = slopes[static_cast<std::size_t>(0.975 * (slopes.size() - 1))];
    }
    return report;
}

}  // namespace ew
