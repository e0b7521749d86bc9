#pragma once

// Stationary, mean-zero, unit-variance processes used to fill matrix
// diagonals, together with their exact autocovariance functions.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ew/errors.hpp"

namespace ew {

enum class ProcessKind {
    IIDGaussian,
    IIDRademacher,
    AR1,             // param = phi, |phi| < 1
    MarkovTwoState,  // param = stay probability, in (0,1)
    EquiCorrelated,  // param = rho, in [0,1)
};

struct ProcessSpec {
    ProcessKind kind = ProcessKind::IIDGaussian;
    double param = 0.0;

    static ProcessSpec iid_gaussian() { return {ProcessKind::IIDGaussian, 0.0}; }
    static ProcessSpec iid_rademacher() { return {ProcessKind::IIDRademacher, 0.0}; }
    static ProcessSpec ar1(double phi) { return {ProcessKind::AR1, phi}; }
    static ProcessSpec markov_two_state(double stay) { return {ProcessKind::MarkovTwoState, stay}; }
    static ProcessSpec equi_correlated(double rho) { return {ProcessKind::EquiCorrelated, rho}; }

    bool operator==(const ProcessSpec&) const = default;
};

inline void validate(const ProcessSpec& spec) {
    switch (spec.kind) {
        case ProcessKind::IIDGaussian:
        case ProcessKind::IIDRademacher:
            return;
        case ProcessKind::AR1:
            if (!(std::abs(spec.param) < 1.0))
                throw parameter_error("AR1 requires |phi| < 1");
            return;
        case ProcessKind::MarkovTwoState:
            if (!(spec.param > 0.0 && spec.param < 1.0))
                throw parameter_error("MarkovTwoState requires stay_prob in (0,1)");
            return;
        case ProcessKind::EquiCorrelated:
            if (!(spec.param >= 0.0 && spec.param < 1.0))
                throw parameter_error("EquiCorrelated requires rho in [0,1)");
            return;
    }
    throw parameter_error("unknown process kind");
}

inline std::string kind_name(ProcessKind k) {
    switch (k) {
        case ProcessKind::IIDGaussian: return "IIDGaussian";
        case ProcessKind::IIDRademacher: return "IIDRademacher";
        case ProcessKind::AR1: return "AR1";
        case ProcessKind::MarkovTwoState: return "MarkovTwoState";
        case ProcessKind::EquiCorrelated: return "EquiCorrelated";
    }
    return "?";
}

inline ProcessKind kind_from_name(const std::string& name) {
    if (name == "IIDGaussian") return ProcessKind::IIDGaussian;
    if (name == "IIDRademacher") return ProcessKind::IIDRademacher;
    if (name == "AR1") return ProcessKind::AR1;
    if (name == "MarkovTwoState") return ProcessKind::MarkovTwoState;
    if (name == "EquiCorrelated") return ProcessKind::EquiCorrelated;
    throw parameter_error("unknown process kind: " + name);
}

// True for processes whose entries are jointly Gaussian, i.e. the ones the
// Wick oracle covers.
inline bool is_gaussian(const ProcessSpec& spec) {
    switch (spec.kind) {
        case ProcessKind::IIDGaussian:
        case ProcessKind::AR1:
        case ProcessKind::EquiCorrelated:
            return true;
        default:
            return false;
    }
}

// Exact lag-t autocovariance of the standardized process. Lag 0 is 1 for
// every variant.
inline double theoretical_covariance(const ProcessSpec& spec, std::uint64_t t) {
    validate(spec);
    if (t == 0) return 1.0;
    switch (spec.kind) {
        case ProcessKind::IIDGaussian:
        case ProcessKind::IIDRademacher:
            return 0.0;
        case ProcessKind::AR1:
            return std::pow(spec.param, static_cast<double>(t));
        case ProcessKind::MarkovTwoState:
            // symmetric +-1 chain: correlation (2s - 1)^t
            return std::pow(2.0 * spec.param - 1.0, static_cast<double>(t));
        case ProcessKind::EquiCorrelated:
            return spec.param;
    }
    return 0.0;
}

// True when theoretical_covariance(t) -> 0, the hypothesis of the positive
// branch of the limit theorem.
inline bool is_decaying(const ProcessSpec& spec) {
    validate(spec);
    if (spec.kind == ProcessKind::EquiCorrelated) return spec.param == 0.0;
    return true;
}

struct DiagonalPath {
    std::vector<double> values;
    ProcessSpec spec;
    std::uint64_t seed = 0;

    std::size_t length() const { return values.size(); }
};

// Draws a stationary sample path of length `length`, deterministically from
// (spec, length, seed). AR1 starts from its exact N(0,1) stationary law and
// MarkovTwoState from the uniform law on {+1,-1}, so the path is stationary
// from the first index.
inline DiagonalPath sample_diagonal(const ProcessSpec& spec, std::size_t length,
                                    std::uint64_t seed) {
    validate(spec);
    if (length == 0) throw domain_error("sample_diagonal: length must be >= 1");

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    DiagonalPath path;
    path.spec = spec;
    path.seed = seed;
    path.values.resize(length);

    switch (spec.kind) {
        case ProcessKind::IIDGaussian:
            for (auto& v : path.values) v = normal(rng);
            break;
        case ProcessKind::IIDRademacher:
            for (auto& v : path.values) v = unif(rng) < 0.5 ? 1.0 : -1.0;
            break;
        case ProcessKind::AR1: {
            const double phi = spec.param;
            const double innov_sd = std::sqrt(1.0 - phi * phi);
            double x = normal(rng);  // stationary initialization
            path.values[0] = x;
            for (std::size_t i = 1; i < length; ++i) {
                x = phi * x + innov_sd * normal(rng);
                path.values[i] = x;
            }
            break;
        }
        case ProcessKind::MarkovTwoState: {
            const double stay = spec.param;
            double x = unif(rng) < 0.5 ? 1.0 : -1.0;
            path.values[0] = x;
            for (std::size_t i = 1; i < length; ++i) {
                if (unif(rng) >= stay) x = -x;
                path.values[i] = x;
            }
            break;
        }
        case ProcessKind::EquiCorrelated: {
            const double rho = spec.param;
            const double shared = std::sqrt(rho) * normal(rng);
            const double own_sd = std::sqrt(1.0 - rho);
            for (auto& v : path.values) v = shared + own_sd * normal(rng);
            break;
        }
    }
    return path;
}

// Mean-corrected lag-t sample autocovariance, divisor = number of summed
// terms (length - t).
inline double empirical_covariance(const DiagonalPath& path, std::size_t t) {
    const std::size_t n = path.length();
    if (t >= n) throw domain_error("empirical_covariance: lag must be < path length");
    double mean = 0.0;
    for (double v : path.values) mean += v;
    mean /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i + t < n; ++i)
        acc += (path.values[i] - mean) * (path.values[i + t] - mean);
    return acc / static_cast<double>(n - t);
}

}  // namespace ew
