#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace hyerslab {

/// Thread cap: HYERSLAB_THREADS if set, else hardware concurrency.
inline int thread_cap() {
    if (const char* env = std::getenv("HYERSLAB_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Runs fn(i) for i in [0, n). Iterations must be independent; callers keep
/// determinism by writing into per-index slots and reducing sequentially.
inline void parallel_for(int n, const std::function<void(int)>& fn) {
    int threads = std::min(thread_cap(), n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([=]() {
            for (int i = t; i < n; i += threads) fn(i);
        });
    }
    for (std::thread& th : pool) th.join();
}

}  // namespace hyerslab
