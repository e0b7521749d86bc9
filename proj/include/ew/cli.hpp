#pragma once

// Experiment drivers behind the `ew` command-line tool. Each driver
// validates its whole configuration, renders the full CSV body in memory,
// and only then touches the output file, so invalid configs never leave
// partial artifacts.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ew/ensemble.hpp"
#include "ew/errors.hpp"
#include "ew/moment_oracle.hpp"
#include "ew/partitions.hpp"
#include "ew/process.hpp"
#include "ew/spectra.hpp"

namespace ew {

struct io_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    ProcessSpec spec;
    unsigned n = 256;
    std::vector<unsigned> n_grid;
    unsigned k = 4;
    std::vector<unsigned> k_list;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    std::size_t bins = 50;
    std::string out = "out.csv";
    unsigned threads = 1;
};

inline void to_json(nlohmann::json& j, const ProcessSpec& spec) {
    j = nlohmann::json{{"kind", kind_name(spec.kind)}, {"param", spec.param}};
}

inline void from_json(const nlohmann::json& j, ProcessSpec& spec) {
    spec.kind = kind_from_name(j.at("kind").get<std::string>());
    spec.param = j.value("param", 0.0);
}

// Applies the fields present in a JSON config file on top of `config`.
inline void apply_config_file(RunConfig& config, const nlohmann::json& j) {
    if (j.contains("spec")) config.spec = j.at("spec").get<ProcessSpec>();
    if (j.contains("n")) config.n = j.at("n").get<unsigned>();
    if (j.contains("n_grid")) config.n_grid = j.at("n_grid").get<std::vector<unsigned>>();
    if (j.contains("k")) config.k = j.at("k").get<unsigned>();
    if (j.contains("k_list")) config.k_list = j.at("k_list").get<std::vector<unsigned>>();
    if (j.contains("trials")) config.trials = j.at("trials").get<std::size_t>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("bins")) config.bins = j.at("bins").get<std::size_t>();
    if (j.contains("out")) config.out = j.at("out").get<std::string>();
    if (j.contains("threads")) config.threads = j.at("threads").get<unsigned>();
}

inline std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_file(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open output file: " + path);
    out << body;
    if (!out) throw io_error("write failed: " + path);
}

inline std::string sibling_path(const std::string& out, const std::string& tag) {
    const auto dot = out.rfind(".csv");
    if (dot != std::string::npos && dot == out.size() - 4)
        return out.substr(0, dot) + "." + tag + ".csv";
    return out + "." + tag + ".csv";
}

// simulate: per-trial KS distance and low moments, plus a pooled-eigenvalue
// histogram.
inline void cmd_simulate(const RunConfig& config) {
    validate(config.spec);
    if (config.n == 0) throw domain_error("simulate: n must be >= 1");
    if (config.trials == 0) throw domain_error("simulate: trials must be >= 1");

    const auto esds = parallel_map(config.trials, config.threads, [&](std::size_t trial) {
        EnsembleConfig ec{config.n, config.spec, {}, trial_seed(config.seed, trial)};
        return eigenvalues(build_matrix(ec));
    });

    std::ostringstream body;
    body << "trial,n,ks_distance,m1,m2,m3,m4,m6\n";
    std::vector<double> pooled;
    pooled.reserve(config.trials * config.n);
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
        const ESD& esd = esds[trial];
        pooled.insert(pooled.end(), esd.eigenvalues.begin(), esd.eigenvalues.end());
        body << trial << ',' << config.n << ',' << fmt(ks_distance(esd));
        for (unsigned k : {1u, 2u, 3u, 4u, 6u}) body << ',' << fmt(esd_moment(esd, k));
        body << '\n';
    }

    std::ostringstream hist;
    hist << "bin_left,bin_right,count,density\n";
    for (const auto& bin : histogram(pooled, config.bins))
        hist << fmt(bin.left) << ',' << fmt(bin.right) << ',' << bin.count << ','
             << fmt(bin.density) << '\n';

    write_file(config.out, body.str());
    write_file(sibling_path(config.out, "hist"), hist.str());
}

// partitions: exact pair-partition counts over an n-grid.
inline void cmd_partitions(const RunConfig& config) {
    const unsigned k = config.k;
    std::vector<unsigned> grid = config.n_grid.empty()
                                     ? std::vector<unsigned>{config.n}
                                     : config.n_grid;
    const auto pps = enumerate_pair_partitions(k);
    for (unsigned n : grid) consistent_count(n, k);  // validate budget up front

    std::ostringstream body;
    body << "k,pi_canonical,crossing,n,count_S,count_S_star,star_ratio\n";
    for (const auto& pi : pps) {
        const bool crossing = is_crossing(pi);
        for (unsigned n : grid) {
            const auto cs = count_S(n, pi);
            const auto css = count_S_star(n, pi);
            body << k << ',' << pi.canonical_string() << ',' << (crossing ? 1 : 0) << ','
                 << n << ',' << cs << ',' << css << ','
                 << fmt(static_cast<double>(css) /
                        std::pow(static_cast<double>(n), k / 2.0 + 1.0))
                 << '\n';
        }
    }
    write_file(config.out, body.str());
}

// oracle: exact Wick trace moment (Gaussian specs) next to its Monte Carlo
// estimate.
inline void cmd_oracle(const RunConfig& config) {
    validate(config.spec);
    if (config.trials < 2) throw domain_error("oracle: trials must be >= 2");
    const auto report = mc_trace_moment(config.n, config.k, config.spec, config.trials,
                                        config.seed, config.threads);
    std::ostringstream body;
    body << "n,k,spec,exact,mc_mean,mc_stderr,trials\n";
    body << report.n << ',' << report.k << ',' << kind_name(config.spec.kind) << '('
         << fmt(config.spec.param) << "),";
    if (report.exact) body << fmt(*report.exact);
    body << ',' << fmt(report.mc_mean) << ',' << fmt(report.mc_stderr) << ','
         << report.trials << '\n';
    write_file(config.out, body.str());
}

// fluctuation: A_4 estimates over the n-grid plus the fitted log-log slope.
inline void cmd_fluctuation(const RunConfig& config) {
    validate(config.spec);
    std::vector<unsigned> grid = config.n_grid.empty()
                                     ? std::vector<unsigned>{64, 128, 256, 512}
                                     : config.n_grid;
    const auto report = fluctuation_scan(config.spec, config.k, grid, config.trials,
                                         config.seed, config.threads);
    std::ostringstream body;
    body << "n,k,spec,a4_estimate,trials\n";
    for (std::size_t i = 0; i < grid.size(); ++i)
        body << grid[i] << ',' << config.k << ',' << kind_name(config.spec.kind) << '('
             << fmt(config.spec.param) << ")," << fmt(report.a4_estimates[i]) << ','
             << config.trials << '\n';
    body << "# slope," << fmt(report.slope) << ",ci_lo," << fmt(report.slope_ci_lo)
         << ",ci_hi," << fmt(report.slope_ci_hi) << '\n';
    write_file(config.out, body.str());
}

// semicircle: density/CDF table on a grid, plus a moment table.
inline void cmd_semicircle(const RunConfig& config) {
    if (config.bins < 2) throw domain_error("semicircle: bins must be >= 2");
    std::ostringstream body;
    body << "x,density,cdf\n";
    for (std::size_t i = 0; i < config.bins; ++i) {
        const double x = -2.5 + 5.0 * static_cast<double>(i) /
                                    static_cast<double>(config.bins - 1);
        body << fmt(x) << ',' << fmt(semicircle_density(x)) << ','
             << fmt(semicircle_cdf(x)) << '\n';
    }
    std::ostringstream moments;
    moments << "k,moment\n";
    for (unsigned k = 0; k <= 12; ++k) moments << k << ',' << fmt(semicircle_moment(k)) << '\n';
    write_file(config.out, body.str());
    write_file(sibling_path(config.out, "moments"), moments.str());
}

}  // namespace ew
