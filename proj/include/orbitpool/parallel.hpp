#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace orbitpool {

/// Worker count: ORBITPOOL_THREADS if set (clamped to >= 1), otherwise
/// hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("ORBITPOOL_THREADS")) {
        long n = std::atol(env);
        if (n >= 1) return static_cast<unsigned>(n);
        return 1;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, count). Work is split into contiguous chunks,
/// one per worker. Results must be written to disjoint locations so the
/// outcome is independent of the thread count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::size_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        threads.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : threads) t.join();
}

/// Pairwise (binary-tree) summation. The tree shape depends only on the
/// number of terms, so results are bit-reproducible and more accurate than
/// a running sum.
template <typename It>
double pairwise_sum(It first, It last) {
    std::size_t n = static_cast<std::size_t>(last - first);
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (It it = first; it != last; ++it) s += *it;
        return s;
    }
    std::size_t half = n / 2;
    return pairwise_sum(first, first + half) + pairwise_sum(first + half, last);
}

/// Pairwise combiner for accumulating a sequence of values (e.g. images)
/// one at a time in index order. Maintains a binary-counter stack of
/// partial aggregates; the combine tree depends only on the item count.
template <typename T, typename Combine>
class PairwiseAccumulator {
public:
    explicit PairwiseAccumulator(Combine combine) : combine_(std::move(combine)) {}

    void push(T value) {
        levels_.push_back(std::move(value));
        ++count_;
        // merge completed pairs, like incrementing a binary counter
        std::uint64_t c = count_;
        while ((c & 1) == 0) {
            T right = std::move(levels_.back());
            levels_.pop_back();
            combine_(levels_.back(), right);
            c >>= 1;
        }
    }

    std::uint64_t count() const { return count_; }
    bool empty() const { return count_ == 0; }

    /// Collapses remaining partials (deepest first) and returns the total.
    T finish() {
        while (levels_.size() > 1) {
            T right = std::move(levels_.back());
            levels_.pop_back();
            combine_(levels_.back(), right);
        }
        T out = std::move(levels_.front());
        levels_.clear();
        count_ = 0;
        return out;
    }

private:
    Combine combine_;
    std::vector<T> levels_;
    std::uint64_t count_ = 0;
};

}  // namespace orbitpool
