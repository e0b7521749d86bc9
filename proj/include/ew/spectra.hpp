#pragma once

// Eigenvalues, empirical spectral distribution statistics, and the
// semicircle reference law on [-2,2].

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

#include "ew/ensemble.hpp"
#include "ew/errors.hpp"

namespace ew {

// Sorted (ascending) real spectrum; the ESD is the uniform measure on it.
struct ESD {
    std::vector<double> eigenvalues;

    std::size_t size() const { return eigenvalues.size(); }
};

// All n real eigenvalues of a symmetric matrix, ascending.
inline ESD eigenvalues(const Matrix& m) {
    if (!m.allFinite()) throw numerical_error("eigenvalues: non-finite entries");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numerical_error("eigenvalues: symmetric eigensolver failed");
    ESD esd;
    esd.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(esd.eigenvalues.begin(), esd.eigenvalues.end());
    return esd;
}

// (1/n) sum lambda^k
inline double esd_moment(const ESD& esd, unsigned k) {
    if (k == 0) return 1.0;
    double acc = 0.0;
    for (double lam : esd.eigenvalues) acc += std::pow(lam, static_cast<double>(k));
    return acc / static_cast<double>(esd.size());
}

// m-th Catalan number, exact integer arithmetic.
inline std::uint64_t catalan(unsigned m) {
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= m; ++i) {
        // C_i = C_{i-1} * 2(2i-1) / (i+1); product is divisible at each step
        c = c * 2 * (2 * i - 1) / (i + 1);
    }
    return c;
}

// k-th moment of the semicircle law: 0 for odd k, C_{k/2} for even k.
inline double semicircle_moment(unsigned k) {
    if (k % 2 != 0) return 0.0;
    return static_cast<double>(catalan(k / 2));
}

inline double semicircle_density(double x) {
    if (x <= -2.0 || x >= 2.0) return 0.0;
    return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

inline double semicircle_cdf(double x) {
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) +
           std::asin(x / 2.0) / std::numbers::pi;
}

// Kolmogorov-Smirnov distance between the ESD and the semicircle law,
// evaluated exactly at the empirical jump points.
inline double ks_distance(const ESD& esd) {
    const std::size_t n = esd.size();
    if (n == 0) throw domain_error("ks_distance: empty ESD");
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = semicircle_cdf(esd.eigenvalues[i]);
        const double lo = static_cast<double>(i) / static_cast<double>(n);
        const double hi = static_cast<double>(i + 1) / static_cast<double>(n);
        d = std::max(d, std::max(f - lo, hi - f));
    }
    return d;
}

// max_{1<=k<=K} |m_k(esd) - m_k(semicircle)|
inline double moment_distance(const ESD& esd, unsigned K) {
    if (K < 2 || K % 2 != 0) throw domain_error("moment_distance: K must be even and >= 2");
    double d = 0.0;
    for (unsigned k = 1; k <= K; ++k)
        d = std::max(d, std::abs(esd_moment(esd, k) - semicircle_moment(k)));
    return d;
}

struct HistogramBin {
    double left = 0.0;
    double right = 0.0;
    std::size_t count = 0;
    double density = 0.0;
};

// Equal-width histogram over [min, max] of the pooled values; density is
// normalized so the bars integrate to 1.
inline std::vector<HistogramBin> histogram(const std::vector<double>& values,
                                           std::size_t bins) {
    if (bins == 0) throw domain_error("histogram: bins must be >= 1");
    if (values.empty()) throw domain_error("histogram: empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) hi = lo + 1.0;
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<HistogramBin> out(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].left = lo + width * static_cast<double>(b);
        out[b].right = lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        ++out[b].count;
    }
    const double mass = width * static_cast<double>(values.size());
    for (auto& bin : out) bin.density = static_cast<double>(bin.count) / mass;
    return out;
}

}  // namespace ew
