#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <set>
#include <string>

#include "qauction/parallel.hpp"
#include "qauction/rng.hpp"

using namespace qa;

namespace {

double noisy(int64_t i) {
    // irrational-ish values so reorderings would actually change the sum
    return std::sin(0.001 * static_cast<double>(i)) + 1.0 / (1.0 + static_cast<double>(i % 97));
}

}  // namespace

TEST_CASE("blocked reduction is identical for every worker count") {
    const int64_t n = 3 * par::kBlock + 17;
    double one = par::blocked_sum(n, noisy, 1);
    for (int workers : {2, 3, 4, 8}) {
        double w = par::blocked_sum(n, noisy, workers);
        CHECK(w == one);  // bitwise, not approximate
    }
    // and matches the default worker count
    CHECK(par::blocked_sum(n, noisy) == one);
}

TEST_CASE("blocked and serial reductions agree on integer counts") {
    const int64_t n = 2 * par::kBlock + 5;
    struct Acc {
        long long hits = 0;
        void merge(const Acc& o) { hits += o.hits; }
    };
    auto body = [](Acc& a, int64_t i) { a.hits += (i % 3 == 0) ? 1 : 0; };
    Acc par_total = par::blocked_reduce<Acc>(n, body);
    Acc ser_total = par::serial_reduce<Acc>(n, body);
    CHECK(par_total.hits == ser_total.hits);
    CHECK(par_total.hits == (n + 2) / 3);
}

TEST_CASE("blocked sum tracks the flat serial fold up to rounding") {
    const int64_t n = 5 * par::kBlock + 311;
    double blocked = par::blocked_sum(n, noisy);
    double serial = par::serial_sum(n, noisy);
    // different accumulation orders, same math
    CHECK(std::abs(blocked - serial) <= 1e-9 * (static_cast<double>(n) + std::abs(serial)));
}

TEST_CASE("empty and tiny ranges") {
    CHECK(par::blocked_sum(0, noisy) == 0.0);
    CHECK(par::blocked_sum(-5, noisy) == 0.0);
    CHECK(par::blocked_sum(1, noisy) == noisy(0));
}

TEST_CASE("worker cap from the environment") {
    CHECK(par::max_workers() >= 1);
    char saved[64] = {0};
    if (const char* old = std::getenv("QAUCTION_THREADS"))
        std::snprintf(saved, sizeof saved, "%s", old);
    setenv("QAUCTION_THREADS", "1", 1);
    CHECK(par::max_workers() == 1);
    if (saved[0])
        setenv("QAUCTION_THREADS", saved, 1);
    else
        unsetenv("QAUCTION_THREADS");
}

TEST_CASE("per-trial streams") {
    RngStream a(123, 7);
    RngStream b(123, 7);
    RngStream c(123, 8);
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t va = a.next_u64();
        all_equal = all_equal && (va == b.next_u64());
        any_diff = any_diff || (va != c.next_u64());
    }
    CHECK(all_equal);
    CHECK(any_diff);

    RngStream d(9);
    for (int i = 0; i < 1000; ++i) {
        double v = d.next_double();
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    std::set<uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        uint64_t v = d.next_below(10);
        CHECK(v < 10);
        seen.insert(v);
    }
    CHECK(seen.size() == 10);  // all residues show up in 1000 draws
    CHECK(d.next_below(1) == 0);
}
