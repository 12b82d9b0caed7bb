#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace morse {

/// Worker cap: MORSE_TOWER_THREADS when set, hardware concurrency otherwise.
inline int thread_cap() {
    if (const char* env = std::getenv("MORSE_TOWER_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

/// Index-parallel loop with deterministic results: every iteration writes
/// only its own slot, so the output is identical for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int workers = thread_cap();
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t nthreads = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nthreads; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nthreads) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace morse
