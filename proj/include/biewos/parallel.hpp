#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <thread>
#include <vector>

namespace biewos {

// Block-partitioned parallel loop. Every iteration writes only to its own
// index, so results are identical for any worker count; callers own the
// (deterministic, ordered) reduction.
template <class F>
void parallel_for(std::int64_t n, int workers, F&& body) {
    if (n <= 0) return;
    workers = std::max(1, workers);
    if (workers == 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    const int w = static_cast<int>(std::min<std::int64_t>(workers, n));
    std::vector<std::thread> pool;
    pool.reserve(w);
    std::vector<std::exception_ptr> errs(w);
    for (int t = 0; t < w; ++t) {
        const std::int64_t lo = n * t / w;
        const std::int64_t hi = n * (t + 1) / w;
        pool.emplace_back([&, lo, hi, t] {
            try {
                for (std::int64_t i = lo; i < hi; ++i) body(i);
            } catch (...) {
                errs[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

} // namespace biewos
