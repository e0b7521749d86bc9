#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "ew/moment_oracle.hpp"

using namespace ew;

namespace {

PairPartition make(unsigned k, std::vector<std::vector<unsigned>> blocks) {
    return partition_from_blocks(k, std::move(blocks));
}

// Regrouped trace moment: the same Wick sum, but accumulated cell by cell
// over the partitions of {1..k}.
double grouped_trace_moment(unsigned n, unsigned k, const ProcessSpec& spec) {
    const EntryCovariance cov(spec);
    double acc = 0.0;
    for (const auto& pi : enumerate_partitions(k)) {
        std::vector<EntryLabel> labels(k);
        std::vector<unsigned> gaps;
        for_each_consistent(n, k, [&](const std::vector<unsigned>& p) {
            if (!detail::gap_classes_match(p, n, pi.class_of, gaps)) return;
            for (unsigned j = 0; j < k; ++j) labels[j] = EntryLabel(p[j], p[(j + 1) % k]);
            acc += wick_product_expectation(labels, cov);
        });
    }
    return acc / std::pow(static_cast<double>(n), 1.0 + k / 2.0);
}

}  // namespace

TEST_CASE("entry covariance lookups") {
    const EntryCovariance cov(ProcessSpec::ar1(0.5));
    CHECK(cov(EntryLabel(2, 5), EntryLabel(2, 5)) == 1.0);
    CHECK(cov(EntryLabel(5, 2), EntryLabel(2, 5)) == 1.0);  // symmetry resolved
    CHECK(cov(EntryLabel(1, 2), EntryLabel(1, 3)) == 0.0);  // distinct diagonals
    CHECK(cov(EntryLabel(1, 2), EntryLabel(3, 4)) == Catch::Approx(0.25));
    CHECK(std::abs(cov(EntryLabel(1, 4), EntryLabel(7, 10))) <= 1.0);
}

TEST_CASE("wick formula, small hand cases") {
    const EntryCovariance cov(ProcessSpec::iid_gaussian());
    CHECK(wick_product_expectation({EntryLabel(1, 2), EntryLabel(1, 2)}, cov) == 1.0);
    CHECK(wick_product_expectation({EntryLabel(1, 2), EntryLabel(1, 3)}, cov) == 0.0);
    CHECK(wick_product_expectation({EntryLabel(1, 2)}, cov) == 0.0);  // odd
    CHECK(wick_product_expectation({}, cov) == 1.0);
}

TEST_CASE("wick formula rejects non-Gaussian specs") {
    const EntryCovariance cov(ProcessSpec::iid_rademacher());
    CHECK_THROWS_AS(
        wick_product_expectation({EntryLabel(1, 2), EntryLabel(1, 2)}, cov),
        unsupported_oracle_error);
    CHECK_THROWS_AS(expected_trace_moment(4, 2, ProcessSpec::markov_two_state(0.8)),
                    unsupported_oracle_error);
}

TEST_CASE("wick fourth moment on one diagonal vs Gaussian simulation") {
    // labels (1,2),(2,3),(3,4),(4,5), all on offset 1, AR1(0.5):
    // pairings give 0.5*0.5 + 0.25*0.25 + 0.125*0.5 = 0.375
    const ProcessSpec spec = ProcessSpec::ar1(0.5);
    const EntryCovariance cov(spec);
    const std::vector<EntryLabel> labels = {EntryLabel(1, 2), EntryLabel(2, 3),
                                            EntryLabel(3, 4), EntryLabel(4, 5)};
    const double closed_form = wick_product_expectation(labels, cov);
    CHECK(closed_form == Catch::Approx(0.375));

    // independent oracle: sample the stationary AR(1) 4-vector directly
    const std::size_t samples = 10'000'000;
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> normal;
    const double phi = 0.5, innov = std::sqrt(1.0 - phi * phi);
    double acc = 0.0, acc2 = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        double x1 = normal(rng);
        double x2 = phi * x1 + innov * normal(rng);
        double x3 = phi * x2 + innov * normal(rng);
        double x4 = phi * x3 + innov * normal(rng);
        const double prod = x1 * x2 * x3 * x4;
        acc += prod;
        acc2 += prod * prod;
    }
    const double mean = acc / static_cast<double>(samples);
    const double var = acc2 / static_cast<double>(samples) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(samples));
    CHECK(std::abs(mean - closed_form) < 3.0 * se);
}

TEST_CASE("exact trace moments, small n") {
    CHECK(expected_trace_moment(1, 2, ProcessSpec::iid_gaussian()) == Catch::Approx(1.0));
    // all 4 consistent tuples at n=2 pair the same entry twice
    CHECK(expected_trace_moment(2, 2, ProcessSpec::iid_gaussian()) == Catch::Approx(1.0));
    // odd moments vanish identically
    for (unsigned k : {1u, 3u, 5u})
        CHECK(expected_trace_moment(6, k, ProcessSpec::ar1(0.7)) == 0.0);
    CHECK_THROWS_AS(expected_trace_moment(2000, 6, ProcessSpec::iid_gaussian()),
                    resource_error);
}

TEST_CASE("partition regrouping leaves the trace moment unchanged") {
    for (const auto& spec :
         {ProcessSpec::iid_gaussian(), ProcessSpec::ar1(0.5),
          ProcessSpec::equi_correlated(0.5)}) {
        const double direct = expected_trace_moment(8, 4, spec);
        const double grouped = grouped_trace_moment(8, 4, spec);
        CHECK(direct == Catch::Approx(grouped).epsilon(1e-12));
    }
}

TEST_CASE("star-consistent expectations are 1 for non-crossing partitions, iid") {
    const EntryCovariance cov(ProcessSpec::iid_gaussian());
    for (const auto& pi : enumerate_pair_partitions(4)) {
        if (is_crossing(pi)) continue;
        std::vector<EntryLabel> labels(4);
        std::vector<unsigned> gaps;
        std::size_t visited = 0;
        for_each_consistent(10, 4, [&](const std::vector<unsigned>& p) {
            if (!detail::gap_classes_match(p, 10, pi.class_of, gaps)) return;
            if (!detail::is_star(p, pi)) return;
            for (unsigned j = 0; j < 4; ++j) labels[j] = EntryLabel(p[j], p[(j + 1) % 4]);
            CHECK(wick_product_expectation(labels, cov) == 1.0);
            ++visited;
        });
        CHECK(visited == count_S_star(10, pi));
    }
}

TEST_CASE("crossing contributions decay under AR(1), persist under equi-correlation") {
    const auto crossing = make(4, {{1, 3}, {2, 4}});
    double prev = 1e9;
    for (unsigned n : {8u, 16u, 24u, 30u}) {
        const double scaled = star_expectation_sum(n, crossing, ProcessSpec::ar1(0.5), true) /
                              std::pow(static_cast<double>(n), 3.0);
        CHECK(scaled < prev);
        prev = scaled;
    }
    // floor 0.5 * rho^2 * (2/3) = 1/12 for rho = 0.5: every star sequence
    // contributes at least rho^2 and the count stays of order (2/3) n^3
    for (unsigned n : {8u, 16u, 24u, 30u}) {
        const double scaled =
            star_expectation_sum(n, crossing, ProcessSpec::equi_correlated(0.5), true) /
            std::pow(static_cast<double>(n), 3.0);
        CHECK(scaled >= 0.5 * 0.25 * (2.0 / 3.0));
    }
}

TEST_CASE("equi-correlated fourth moment exceeds the iid one") {
    const double iid = expected_trace_moment(16, 4, ProcessSpec::iid_gaussian());
    const double equi = expected_trace_moment(16, 4, ProcessSpec::equi_correlated(0.5));
    CHECK(equi > iid + 0.05);

    const auto iid_mc = mc_trace_moment(16, 4, ProcessSpec::iid_gaussian(), 800, 5);
    REQUIRE(iid_mc.exact.has_value());
    CHECK(std::abs(*iid_mc.exact - iid_mc.mc_mean) < 3.0 * iid_mc.mc_stderr);
    const auto equi_mc = mc_trace_moment(16, 4, ProcessSpec::equi_correlated(0.5), 800, 5);
    REQUIRE(equi_mc.exact.has_value());
    CHECK(std::abs(*equi_mc.exact - equi_mc.mc_mean) < 3.0 * equi_mc.mc_stderr);
}

TEST_CASE("monte carlo moments, degenerate and odd cases") {
    const auto tiny = mc_trace_moment(1, 2, ProcessSpec::iid_gaussian(), 100000, 77);
    CHECK(std::abs(tiny.mc_mean - 1.0) < 3.0 * tiny.mc_stderr);
    CHECK(tiny.semicircle_target == 1.0);
    CHECK_THROWS_AS(mc_trace_moment(4, 2, ProcessSpec::iid_gaussian(), 1, 1), domain_error);

    // non-Gaussian spec: Monte Carlo only, no exact value
    const auto rad = mc_trace_moment(16, 4, ProcessSpec::iid_rademacher(), 200, 3);
    CHECK(!rad.exact.has_value());
    CHECK(rad.mc_mean > 0.0);
}

TEST_CASE("trace powers agree with the spectral moments") {
    EnsembleConfig config{32, ProcessSpec::ar1(0.3), {}, 13};
    const Matrix x = build_matrix(config);
    const ESD esd = eigenvalues(x);
    for (unsigned k : {1u, 2u, 3u, 4u, 5u})
        CHECK(trace_power(x, k) / 32.0 ==
              Catch::Approx(esd_moment(esd, k)).epsilon(1e-8));
    CHECK(trace_power(x, 0) == 32.0);
}

TEST_CASE("fluctuation statistics") {
    CHECK(fourth_central_moment(std::vector<double>(50, 0.0)) == 0.0);
    CHECK(fourth_central_moment({1.0, -1.0, 1.0, -1.0}) == Catch::Approx(1.0));
    CHECK_THROWS_AS(
        fluctuation_scan(ProcessSpec::iid_gaussian(), 2, {64}, 100, 1), domain_error);
    CHECK_THROWS_AS(
        fluctuation_scan(ProcessSpec::iid_gaussian(), 2, {16, 32}, 50, 1), domain_error);

    const auto report =
        fluctuation_scan(ProcessSpec::iid_gaussian(), 2, {16, 32, 64}, 150, 42);
    REQUIRE(report.a4_estimates.size() == 3);
    for (double a4 : report.a4_estimates) CHECK(a4 >= 0.0);
    CHECK(std::isfinite(report.slope));
    CHECK(report.slope_ci_lo <= report.slope_ci_hi);
}
