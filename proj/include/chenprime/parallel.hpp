#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace chenprime {

// Static partition of [0, count) over `threads` workers. Results must be
// written to per-index slots, which keeps output independent of scheduling.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    threads = std::max(1U, threads);
    if (threads == 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, count);
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
}

// Sum of `count` terms produced by term(i), grouped into fixed blocks whose
// partial sums are combined pairwise. The grouping depends only on `count`,
// so the rounding is identical for any thread count.
template <class T, class TermFn>
T blocked_sum(std::size_t count, TermFn&& term, unsigned threads = 1, std::size_t block = 1024) {
    const std::size_t nblocks = (count + block - 1) / block;
    std::vector<T> partial(nblocks, T{});
    parallel_for(nblocks, threads, [&](std::size_t bi) {
        T acc{};
        const std::size_t end = std::min(count, (bi + 1) * block);
        for (std::size_t i = bi * block; i < end; ++i) acc += term(i);
        partial[bi] = acc;
    });
    while (partial.size() > 1) {
        std::vector<T> next((partial.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i) {
            next[i] = partial[2 * i];
            if (2 * i + 1 < partial.size()) next[i] += partial[2 * i + 1];
        }
        partial.swap(next);
    }
    return partial.empty() ? T{} : partial.front();
}

} // namespace chenprime
