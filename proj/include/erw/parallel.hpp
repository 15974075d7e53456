#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace erw {

// Runs fn(i) for i in [0, count). Results must be written to per-i slots so
// the output is identical for any thread count.
template <typename F>
void parallel_paths(uint64_t count, int threads, F&& fn) {
    if (threads <= 1 || count <= 1) {
        for (uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const auto workers = static_cast<uint64_t>(threads) < count ? static_cast<uint64_t>(threads)
                                                                : count;
    std::atomic<uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (uint64_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace erw
