#ifndef TCR_UTIL_HPP
#define TCR_UTIL_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "tcr/types.hpp"

namespace tcr {

/// XOR (symmetric difference) of two sorted chains into out.
inline void xor_chains(const Chain& a, const Chain& b, Chain& out) {
    out.clear();
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] < b[j])
            out.push_back(a[i++]);
        else if (b[j] < a[i])
            out.push_back(b[j++]);
        else {
            ++i;
            ++j;
        }
    }
    out.insert(out.end(), a.begin() + i, a.end());
    out.insert(out.end(), b.begin() + j, b.end());
}

/// a ^= b using scratch storage.
inline void xor_into(Chain& a, const Chain& b, Chain& scratch) {
    xor_chains(a, b, scratch);
    a.swap(scratch);
}

/// |a ^ b| with early abort: returns limit as soon as the count reaches it.
inline std::int64_t sym_diff_size_capped(const Chain& a, const Chain& b, std::int64_t limit) {
    std::int64_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (count >= limit) return limit;
        if (a[i] < b[j]) {
            ++count;
            ++i;
        } else if (b[j] < a[i]) {
            ++count;
            ++j;
        } else {
            ++i;
            ++j;
        }
    }
    count += static_cast<std::int64_t>((a.size() - i) + (b.size() - j));
    return std::min(count, limit);
}

/// Fixed-chunk parallel loop; fn(index, thread_id). Deterministic as long as
/// iterations write disjoint state.
inline void parallel_for(std::int64_t n, int threads,
                         const std::function<void(std::int64_t, int)>& fn) {
    if (n <= 0) return;
    threads = std::max(1, threads);
    if (threads == 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i, 0);
        return;
    }
    int workers = static_cast<int>(std::min<std::int64_t>(threads, n));
    std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
        std::int64_t lo = t * chunk;
        std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, t, &fn] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i, t);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace tcr

#endif
