#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace acd::detail {

// Runs fn(i) for i in [begin, end) across up to num_threads workers
// (0 = hardware concurrency). Each index is processed exactly once; fn must
// only write to state owned by index i.
template <typename Fn>
void parallel_for(std::int64_t begin, std::int64_t end, int num_threads, Fn&& fn) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    int threads = num_threads > 0 ? num_threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    threads = static_cast<int>(std::max<std::int64_t>(1, std::min<std::int64_t>(threads, count)));
    if (threads == 1) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::int64_t chunk = (count + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const std::int64_t lo = begin + t * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace acd::detail
