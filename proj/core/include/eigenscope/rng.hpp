#pragma once

#include <cmath>
#include <cstdint>

namespace eigenscope {

// 64-bit finalizer with full avalanche (splitmix64).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// Counter-based stream: every output is a pure function of
// (seed, stream, counter), so per-sample streams derived from
// (seed, sample index) are reproducible under any parallel schedule.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : key_(mix64(seed ^ mix64(stream * 0x9e3779b97f4a7c15ull + 0x853c49e6748fea9bull))) {}

    std::uint64_t next_u64() { return mix64(key_ + (++ctr_) * 0xda942042e4dd58b5ull); }

    // uniform in [0, 1): 53 mantissa bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard normal via Box-Muller (pairs cached)
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 6.283185307179586476925287 * u2;
        cached_ = r * std::sin(th);
        has_cached_ = true;
        return r * std::cos(th);
    }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace eigenscope
