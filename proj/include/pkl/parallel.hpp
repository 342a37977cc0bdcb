#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace pkl {

/// Runs fn(k) for k in [0, count) on a small worker pool. Results must be
/// written to per-index slots so that the outcome does not depend on
/// scheduling.
template <class Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (count <= 0) return;
    if (threads <= 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min(threads, count);
    if (threads == 1) {
        for (int k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&]() {
            for (int k = next++; k < count; k = next++) fn(k);
        });
    for (auto& th : pool) th.join();
}

}  // namespace pkl
