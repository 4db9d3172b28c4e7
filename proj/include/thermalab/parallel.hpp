#pragma once

#include <functional>
#include <thread>
#include <vector>

namespace thermalab {

// Runs fn(i) for i in [0, n). Work item i must write only into its own
// output slot; reductions happen after the loop in index order, so results
// are byte-identical for any thread count.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    if (threads > n) threads = n;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([w, n, threads, &fn] {
            for (int i = w; i < n; i += threads) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace thermalab
