#pragma once

// Exact combinatorics behind the trace-moment expansion: set partitions,
// pair partitions, crossing classification, and consistent-sequence counts.
// All indices are 1-based, matching the usual trace-expansion bookkeeping.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ew/errors.hpp"

namespace ew {

struct Partition {
    unsigned k = 0;
    // Disjoint nonempty blocks covering {1..k}, sorted by least element.
    std::vector<std::vector<unsigned>> blocks;
    // class_of[i-1] = index of the block containing i; blocks are numbered
    // in order of first appearance, so this is a restricted growth string.
    std::vector<unsigned> class_of;

    bool is_pair_partition() const {
        return k % 2 == 0 &&
               std::all_of(blocks.begin(), blocks.end(),
                           [](const auto& b) { return b.size() == 2; });
    }

    std::string canonical_string() const {
        std::string s;
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            if (i) s += '|';
            for (unsigned e : blocks[i]) s += std::to_string(e);
        }
        return s;
    }

    bool operator==(const Partition&) const = default;
};

using PairPartition = Partition;

// Builds a Partition from its class-index vector (any labelling).
inline Partition partition_from_classes(const std::vector<unsigned>& classes) {
    Partition p;
    p.k = static_cast<unsigned>(classes.size());
    std::vector<int> remap(classes.size(), -1);
    unsigned next = 0;
    p.class_of.resize(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (remap[classes[i]] < 0) {
            remap[classes[i]] = static_cast<int>(next++);
            p.blocks.emplace_back();
        }
        const auto c = static_cast<unsigned>(remap[classes[i]]);
        p.class_of[i] = c;
        p.blocks[c].push_back(static_cast<unsigned>(i + 1));
    }
    return p;
}

inline Partition partition_from_blocks(unsigned k,
                                       std::vector<std::vector<unsigned>> blocks) {
    std::vector<unsigned> classes(k, 0);
    std::vector<bool> seen(k, false);
    for (std::size_t c = 0; c < blocks.size(); ++c) {
        if (blocks[c].empty()) throw domain_error("partition: empty block");
        for (unsigned e : blocks[c]) {
            if (e < 1 || e > k || seen[e - 1])
                throw domain_error("partition: blocks must be disjoint subsets of {1..k}");
            seen[e - 1] = true;
            classes[e - 1] = static_cast<unsigned>(c);
        }
    }
    if (!std::all_of(seen.begin(), seen.end(), [](bool b) { return b; }))
        throw domain_error("partition: blocks must cover {1..k}");
    return partition_from_classes(classes);
}

inline constexpr unsigned kEnumerationGuard = 12;

// All set partitions of {1..k}, each exactly once, via restricted growth
// strings in lexicographic order.
inline std::vector<Partition> enumerate_partitions(unsigned k) {
    if (k == 0) throw domain_error("enumerate_partitions: k must be >= 1");
    if (k > kEnumerationGuard)
        throw resource_error("enumerate_partitions: k exceeds enumeration guard");
    std::vector<Partition> out;
    std::vector<unsigned> rgs(k, 0);
    std::function<void(unsigned, unsigned)> rec = [&](unsigned i, unsigned max_used) {
        if (i == k) {
            out.push_back(partition_from_classes(rgs));
            return;
        }
        for (unsigned c = 0; c <= max_used + 1 && c <= i; ++c) {
            rgs[i] = c;
            rec(i + 1, std::max(max_used, c));
        }
    };
    rgs[0] = 0;
    if (k == 1) {
        out.push_back(partition_from_classes(rgs));
    } else {
        rec(1, 0);
    }
    return out;
}

// All perfect matchings of {1..k}; there are (k-1)!! of them.
inline std::vector<PairPartition> enumerate_pair_partitions(unsigned k) {
    if (k == 0 || k % 2 != 0)
        throw domain_error("enumerate_pair_partitions: k must be even and >= 2");
    if (k > kEnumerationGuard)
        throw resource_error("enumerate_pair_partitions: k exceeds enumeration guard");
    std::vector<PairPartition> out;
    std::vector<std::vector<unsigned>> blocks;
    std::vector<bool> used(k + 1, false);
    std::function<void()> rec = [&]() {
        unsigned lo = 0;
        for (unsigned i = 1; i <= k; ++i)
            if (!used[i]) { lo = i; break; }
        if (lo == 0) {
            out.push_back(partition_from_blocks(k, blocks));
            return;
        }
        used[lo] = true;
        for (unsigned j = lo + 1; j <= k; ++j) {
            if (used[j]) continue;
            used[j] = true;
            blocks.push_back({lo, j});
            rec();
            blocks.pop_back();
            used[j] = false;
        }
        used[lo] = false;
    };
    rec();
    return out;
}

// A matching is crossing iff indices i<j<l<m exist with i~l and j~m.
inline bool is_crossing(const PairPartition& pp) {
    if (!pp.is_pair_partition()) throw domain_error("is_crossing: not a pair partition");
    const unsigned k = pp.k;
    for (unsigned i = 1; i <= k; ++i)
        for (unsigned j = i + 1; j <= k; ++j)
            for (unsigned l = j + 1; l <= k; ++l)
                for (unsigned m = l + 1; m <= k; ++m)
                    if (pp.class_of[i - 1] == pp.class_of[l - 1] &&
                        pp.class_of[j - 1] == pp.class_of[m - 1])
                        return true;
    return false;
}

// Number of non-crossing pair partitions of {1..k}; equals the Catalan
// number C_{k/2}.
inline std::uint64_t count_ncpp(unsigned k) {
    const auto all = enumerate_pair_partitions(k);
    return static_cast<std::uint64_t>(
        std::count_if(all.begin(), all.end(),
                      [](const PairPartition& p) { return !is_crossing(p); }));
}

// One step of a trace walk: the pair P_j = (p_j, q_j), with q_j = p_{j+1}
// cyclically.
struct ConsistentSequence {
    std::vector<std::pair<unsigned, unsigned>> pairs;

    unsigned k() const { return static_cast<unsigned>(pairs.size()); }
};

inline constexpr std::uint64_t kConsistentBudget = 10'000'000;

inline std::uint64_t consistent_count(std::uint64_t n, unsigned k,
                                      std::uint64_t budget = kConsistentBudget) {
    std::uint64_t total = 1;
    for (unsigned i = 0; i < k; ++i) {
        if (total > budget / n) throw resource_error("consistent enumeration budget exceeded");
        total *= n;
    }
    return total;
}

// Visits every consistent k-tuple over {1..n}, presented as the vector
// (p_1,...,p_k) of left endpoints (which determines all q's).
template <typename Fn>
inline void for_each_consistent(unsigned n, unsigned k, Fn&& fn,
                                std::uint64_t budget = kConsistentBudget) {
    if (n == 0 || k == 0) throw domain_error("for_each_consistent: n, k must be >= 1");
    consistent_count(n, k, budget);
    std::vector<unsigned> p(k, 1);
    for (;;) {
        fn(const_cast<const std::vector<unsigned>&>(p));
        unsigned i = 0;
        while (i < k && p[i] == n) p[i++] = 1;
        if (i == k) break;
        ++p[i];
    }
}

inline ConsistentSequence sequence_from_lefts(const std::vector<unsigned>& p) {
    ConsistentSequence seq;
    const auto k = static_cast<unsigned>(p.size());
    seq.pairs.reserve(k);
    for (unsigned j = 0; j < k; ++j) seq.pairs.emplace_back(p[j], p[(j + 1) % k]);
    return seq;
}

// All n^k consistent tuples.
inline std::vector<ConsistentSequence> enumerate_consistent(unsigned n, unsigned k) {
    std::vector<ConsistentSequence> out;
    out.reserve(consistent_count(n, k));
    for_each_consistent(n, k, [&](const std::vector<unsigned>& p) {
        out.push_back(sequence_from_lefts(p));
    });
    return out;
}

// The unique partition grouping indices by equal gap |q_j - p_j|.
inline Partition partition_of_sequence(const ConsistentSequence& seq) {
    const unsigned k = seq.k();
    if (k == 0) throw domain_error("partition_of_sequence: empty sequence");
    std::vector<unsigned> classes(k);
    std::vector<unsigned> gaps;
    for (unsigned j = 0; j < k; ++j) {
        const auto [p, q] = seq.pairs[j];
        const unsigned g = p > q ? p - q : q - p;
        auto it = std::find(gaps.begin(), gaps.end(), g);
        if (it == gaps.end()) {
            classes[j] = static_cast<unsigned>(gaps.size());
            gaps.push_back(g);
        } else {
            classes[j] = static_cast<unsigned>(it - gaps.begin());
        }
    }
    return partition_from_classes(classes);
}

namespace detail {

// Gap classes of a left-endpoint vector in first-occurrence labelling,
// written into `classes`. Returns false early if that labelling can no
// longer match `target`.
inline bool gap_classes_match(const std::vector<unsigned>& p, unsigned n,
                              const std::vector<unsigned>& target,
                              std::vector<unsigned>& gaps) {
    (void)n;
    const auto k = static_cast<unsigned>(p.size());
    gaps.clear();
    for (unsigned j = 0; j < k; ++j) {
        const unsigned a = p[j], b = p[(j + 1) % k];
        const unsigned g = a > b ? a - b : b - a;
        auto it = std::find(gaps.begin(), gaps.end(), g);
        unsigned cls;
        if (it == gaps.end()) {
            cls = static_cast<unsigned>(gaps.size());
            gaps.push_back(g);
        } else {
            cls = static_cast<unsigned>(it - gaps.begin());
        }
        if (cls != target[j]) return false;
    }
    return true;
}

}  // namespace detail

// #S_n(pi): consistent tuples whose gap partition is exactly pi.
inline std::uint64_t count_S(unsigned n, const Partition& pi,
                             std::uint64_t budget = kConsistentBudget) {
    std::uint64_t count = 0;
    std::vector<unsigned> gaps;
    for_each_consistent(
        n, pi.k,
        [&](const std::vector<unsigned>& p) {
            if (detail::gap_classes_match(p, n, pi.class_of, gaps)) ++count;
        },
        budget);
    return count;
}

namespace detail {

inline bool is_star(const std::vector<unsigned>& p, const Partition& pi) {
    const unsigned k = pi.k;
    for (const auto& block : pi.blocks) {
        const unsigned i = block[0], j = block[1];
        const int si = static_cast<int>(p[i % k]) - static_cast<int>(p[i - 1]);
        const int sj = static_cast<int>(p[j % k]) - static_cast<int>(p[j - 1]);
        if (si != -sj) return false;
    }
    return true;
}

}  // namespace detail

// #S_n*(pi): pi-consistent tuples where matched pairs traverse opposite
// orientations, q_i - p_i = p_j - q_j.
inline std::uint64_t count_S_star(unsigned n, const PairPartition& pi,
                                  std::uint64_t budget = kConsistentBudget) {
    if (!pi.is_pair_partition()) throw domain_error("count_S_star: not a pair partition");
    std::uint64_t count = 0;
    std::vector<unsigned> gaps;
    for_each_consistent(
        n, pi.k,
        [&](const std::vector<unsigned>& p) {
            if (detail::gap_classes_match(p, n, pi.class_of, gaps) &&
                detail::is_star(p, pi))
                ++count;
        },
        budget);
    return count;
}

// #S_n*(pi) / n^{k/2+1}; tends to 1 for non-crossing pi.
inline double star_ratio(unsigned n, const PairPartition& pi,
                         std::uint64_t budget = kConsistentBudget) {
    const double denom = std::pow(static_cast<double>(n), pi.k / 2.0 + 1.0);
    return static_cast<double>(count_S_star(n, pi, budget)) / denom;
}

// #S_n(pi) - #S_n*(pi); o(n^{k/2+1}) along any fixed pair partition.
inline std::uint64_t residual_count(unsigned n, const PairPartition& pi,
                                    std::uint64_t budget = kConsistentBudget) {
    return count_S(n, pi, budget) - count_S_star(n, pi, budget);
}

}  // namespace ew
