#pragma once

#include <cstddef>

namespace mixedindep::math {

inline constexpr std::size_t kPairwiseBlock = 4096;

// Sums f(0), ..., f(n-1). Plain accumulation up to the block size, pairwise
// splitting above it so rounding error grows like O(log n) on large samples.
template <typename F>
double pairwise_sum(std::size_t begin, std::size_t end, F&& f) {
    const std::size_t n = end - begin;
    if (n <= kPairwiseBlock) {
        double acc = 0.0;
        for (std::size_t i = begin; i < end; ++i) acc += f(i);
        return acc;
    }
    const std::size_t mid = begin + n / 2;
    return pairwise_sum(begin, mid, f) + pairwise_sum(mid, end, f);
}

template <typename F>
double pairwise_sum(std::size_t n, F&& f) {
    return pairwise_sum<F>(0, n, static_cast<F&&>(f));
}

} // namespace mixedindep::math
