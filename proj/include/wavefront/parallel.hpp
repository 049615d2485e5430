#pragma once

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace wavefront {

/// Worker cap from WAVEFRONT_LAB_THREADS, defaulting to the hardware count.
inline unsigned worker_count() {
    if (const char* env = std::getenv("WAVEFRONT_LAB_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Run fn(i) for i in [0, n) on up to worker_count() threads.
template <class Fn>
void parallel_for(int n, Fn&& fn) {
    const unsigned workers = std::min<unsigned>(worker_count(), n > 0 ? n : 1);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace wavefront
