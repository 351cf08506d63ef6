#pragma once

#include <cmath>
#include <cstdint>

namespace qa {

// SplitMix64 stream.  Each Monte Carlo trial derives its own stream from
// (seed, stream_id), so aggregate results are independent of thread count
// and scheduling order.
class RngStream {
public:
    explicit RngStream(uint64_t seed) : state_(seed) {}

    RngStream(uint64_t seed, uint64_t stream_id)
        : state_(mix(seed + 0x9e3779b97f4a7c15ull * (stream_id + 1))) {}

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1), 53 bits
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // exactly uniform in [0, n), n >= 1; mask-and-reject
    uint64_t next_below(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t mask = ~uint64_t(0) >> countl_zero64(n - 1);
        uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }

    // standard normal via Box-Muller (one value per call; simple and
    // stateless, good enough for sampling test matrices)
    double next_gaussian() {
        double u1 = next_double();
        double u2 = next_double();
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdull;
        z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ull;
        return z ^ (z >> 33);
    }
    static int countl_zero64(uint64_t x) {
        return x == 0 ? 64 : __builtin_clzll(x);
    }
    uint64_t state_;
};

}  // namespace qa
