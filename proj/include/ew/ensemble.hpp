#pragma once

// Symmetric random matrix with independent stationary processes on the
// diagonals and 1/sqrt(n) scaling.

#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>

#include <Eigen/Dense>

#include "ew/errors.hpp"
#include "ew/process.hpp"

namespace ew {

using Matrix = Eigen::MatrixXd;

struct EnsembleConfig {
    std::size_t n = 0;
    ProcessSpec default_spec;
    std::map<std::size_t, ProcessSpec> per_offset_overrides;
    std::uint64_t base_seed = 0;

    const ProcessSpec& spec_for_offset(std::size_t r) const {
        auto it = per_offset_overrides.find(r);
        return it == per_offset_overrides.end() ? default_spec : it->second;
    }
};

inline void validate(const EnsembleConfig& config) {
    if (config.n == 0) throw domain_error("EnsembleConfig: n must be >= 1");
    validate(config.default_spec);
    for (const auto& [r, spec] : config.per_offset_overrides) validate(spec);
}

// splitmix64 finalizer
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stream seed for the diagonal at offset r. Distinct offsets get distinct,
// reproducible streams.
inline std::uint64_t entry_seed(std::uint64_t base_seed, std::uint64_t offset) {
    return mix64(mix64(base_seed) ^ mix64(offset + 1));
}

// Builds X(p, p+r) = a_r(p) / sqrt(n) for each offset r, mirrored to the
// lower triangle. Exactly symmetric by construction.
inline Matrix build_matrix(const EnsembleConfig& config) {
    validate(config);
    const std::size_t n = config.n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    Matrix x(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        const auto path = sample_diagonal(config.spec_for_offset(r), n - r,
                                          entry_seed(config.base_seed, r));
        for (std::size_t p = 0; p + r < n; ++p) {
            const double v = path.values[p] * scale;
            x(p, p + r) = v;
            x(p + r, p) = v;
        }
    }
    return x;
}

// Plain-text dump: one row per line, space-separated decimal floats.
inline void dump_matrix(const Matrix& m, std::ostream& out) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out << ' ';
            out << m(i, j);
        }
        out << '\n';
    }
}

}  // namespace ew
