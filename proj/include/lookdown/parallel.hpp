#pragma once

#include <thread>
#include <vector>

namespace lookdown {

// Replicate-level map with a deterministic, thread-count-independent result:
// every replicate derives its own seed, and results are collected by index.
template <class Fn>
auto replicate_map(long long reps, int threads, Fn&& fn) {
    using R = decltype(fn(0ll));
    std::vector<R> results(static_cast<std::size_t>(reps));
    if (threads <= 1 || reps < 2) {
        for (long long r = 0; r < reps; ++r) results[static_cast<std::size_t>(r)] = fn(r);
        return results;
    }
    threads = static_cast<int>(std::min<long long>(threads, reps));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (long long r = t; r < reps; r += threads) results[static_cast<std::size_t>(r)] = fn(r);
        });
    }
    for (auto& th : pool) th.join();
    return results;
}

inline int default_threads() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace lookdown
