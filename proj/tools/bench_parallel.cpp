// Times the blocked parallel reduction against the serial reference on the
// two kernels that dominate the simulators: density-matrix eigenvalue work
// and plain streaming arithmetic. Two properties are checked: the blocked
// reduction must give bit-identical totals for every worker count (its merge
// order is fixed), and it must agree with the independent flat-order serial
// fold up to accumulated rounding. Exits nonzero if either fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "qauction/matrix.hpp"
#include "qauction/parallel.hpp"
#include "qauction/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double eig_body(int64_t i) {
    qa::RngStream rng(0x9e3779b9u, static_cast<uint64_t>(i));
    qa::DensityMatrix rho = qa::random_density(rng, 4);
    return qa::eig_max(rho.mat).value;
}

double stream_body(int64_t i) {
    // cheap arithmetic kernel: mixes and folds a counter-based stream
    qa::RngStream rng(0x1234u, static_cast<uint64_t>(i));
    double acc = 0.0;
    for (int k = 0; k < 64; ++k) acc += rng.next_double() - 0.5;
    return acc;
}

template <typename Body>
int run_case(const char* name, int64_t n, Body body) {
    auto t0 = Clock::now();
    double serial = qa::par::serial_sum(n, body);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    double parallel = qa::par::blocked_sum(n, body);
    double t_parallel = seconds_since(t0);

    double single = qa::par::blocked_sum(n, body, 1);
    bool stable = single == parallel;
    double tol = 1e-9 * (static_cast<double>(n) + std::abs(serial));
    bool close = std::abs(serial - parallel) <= tol;
    std::printf(
        "%-12s n=%-9lld serial %8.3fs  parallel %8.3fs  speedup %5.2fx  %s  %s\n", name,
        static_cast<long long>(n), t_serial, t_parallel,
        t_parallel > 0 ? t_serial / t_parallel : 0.0,
        stable ? "worker-stable" : "WORKER-UNSTABLE",
        close ? "matches-reference" : "REFERENCE-MISMATCH");
    return (stable && close) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int64_t scale = 1;
    if (argc > 1) scale = std::atoll(argv[1]);
    if (scale < 1) scale = 1;

    std::printf("workers: %d\n", qa::par::max_workers());
    int rc = 0;
    rc |= run_case("eigenvalue", 20000 * scale, eig_body);
    rc |= run_case("streaming", 400000 * scale, stream_body);
    return rc;
}
