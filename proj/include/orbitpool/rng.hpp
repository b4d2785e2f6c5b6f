#pragma once

#include <cmath>
#include <cstdint>

namespace orbitpool {

// Stateless counter-based generator: every draw is a pure function of
// (seed, stream, counter), so sample i always sees the same bits no matter
// how work is scheduled across threads or batches.
namespace detail {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(detail::splitmix64(detail::splitmix64(seed) ^ (stream * 0xd6e8feb86659fd93ULL))) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return detail::splitmix64(key_ ^ detail::splitmix64(counter + 0x632be59bd9b4e019ULL));
    }

    /// Uniform double in [0, 1), 53 bits of resolution.
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(std::uint64_t counter, double lo, double hi) const {
        return lo + (hi - lo) * uniform(counter);
    }

    /// Standard normal via Box-Muller on two decorrelated counters.
    double normal(std::uint64_t counter) const;

    std::uint64_t key() const { return key_; }

private:
    std::uint64_t key_;
};

inline double CounterRng::normal(std::uint64_t counter) const {
    // two independent uniforms from disjoint counter lanes
    CounterRng lane_a(key_, 0x9d3a17e2c41f5b6dULL);
    CounterRng lane_b(key_, 0x5851f42d4c957f2dULL);
    double u1 = lane_a.uniform(counter);
    double u2 = lane_b.uniform(counter);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
}

/// Derives an independent sub-stream key, for giving each component of a
/// larger computation (axis, template, slope point, ...) its own lane.
inline CounterRng substream(const CounterRng& rng, std::uint64_t tag) {
    return CounterRng(rng.key(), tag + 1);
}

}  // namespace orbitpool
