#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qa::par {

// Worker cap: OpenMP's max, clamped by QAUCTION_THREADS if set.
inline int max_workers() {
#ifdef _OPENMP
    int n = omp_get_max_threads();
#else
    int n = 1;
#endif
    if (const char* env = std::getenv("QAUCTION_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < n) n = cap;
    }
    return n;
}

inline constexpr int64_t kBlock = 4096;

// Deterministic blocked map-reduce.  Work items are grouped into fixed
// blocks of kBlock; each block is reduced sequentially by one worker and the
// block partials are merged in block order afterwards.  The floating-point
// result is therefore identical for every worker count, including 1.
//
// Acc needs: default construction and merge(const Acc&).
// body(acc, i) accumulates item i into acc.
template <class Acc, class Body>
Acc blocked_reduce(int64_t n, Body&& body, int workers = max_workers()) {
    if (n <= 0) return Acc{};
    int64_t nblocks = (n + kBlock - 1) / kBlock;
    std::vector<Acc> partial(static_cast<size_t>(nblocks));
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
    for (int64_t b = 0; b < nblocks; ++b) {
        Acc acc;
        int64_t end = std::min(n, (b + 1) * kBlock);
        for (int64_t i = b * kBlock; i < end; ++i) body(acc, i);
        partial[static_cast<size_t>(b)] = acc;
    }
    Acc total;
    for (int64_t b = 0; b < nblocks; ++b) total.merge(partial[static_cast<size_t>(b)]);
    return total;
}

// Serial reference for blocked_reduce: one flat loop, accumulation in item
// order.  Kept as an independent implementation for testing; floating-point
// totals may differ from the blocked order by rounding only.
template <class Acc, class Body>
Acc serial_reduce(int64_t n, Body&& body) {
    Acc acc;
    for (int64_t i = 0; i < n; ++i) body(acc, i);
    return acc;
}

struct SumAcc {
    double sum = 0.0;
    void merge(const SumAcc& o) { sum += o.sum; }
};

template <class F>
double blocked_sum(int64_t n, F&& f, int workers = max_workers()) {
    return blocked_reduce<SumAcc>(
               n, [&](SumAcc& a, int64_t i) { a.sum += f(i); }, workers)
        .sum;
}

template <class F>
double serial_sum(int64_t n, F&& f) {
    double s = 0.0;
    for (int64_t i = 0; i < n; ++i) s += f(i);
    return s;
}

}  // namespace qa::par
