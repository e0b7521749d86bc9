#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace ew {

inline unsigned default_threads() {
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// Evaluates fn(0..count-1) into a vector, in index order, optionally across
// threads. Results are identical regardless of the thread count.
template <typename Fn>
auto parallel_map(std::size_t count, unsigned threads, Fn&& fn) {
    using R = decltype(fn(std::size_t{0}));
    std::vector<R> out(count);
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            out[i] = fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned nthreads = std::min<std::size_t>(threads, count);
    pool.reserve(nthreads);
    for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return out;
}

}  // namespace ew
