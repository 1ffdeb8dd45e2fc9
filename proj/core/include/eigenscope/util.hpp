#pragma once

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace eigenscope {

// Number of worker threads: EIGENSCOPE_THREADS caps parallelism,
// 0 or unset means hardware concurrency.
inline unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("EIGENSCOPE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v > 0) return static_cast<unsigned>(v) < hw ? static_cast<unsigned>(v) : hw;
    }
    return hw;
}

// Deterministic parallel map: f(i) is called exactly once for each
// i in [0, n); callers write results into slot i of a preallocated
// buffer, so the reduction order is fixed regardless of scheduling.
template <class F>
void parallel_for(std::size_t n, F&& f) {
    unsigned workers = thread_cap();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                f(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

// Full-precision, locale-independent decimal formatting (17 significant
// digits); the CSV byte-determinism contract rests on this.
inline std::string format_full(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

inline std::string format_fixed(double v, int digits) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

}  // namespace eigenscope
