#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "qauction/epr.hpp"
#include "qauction/partition.hpp"
#include "qauction/rng.hpp"

using namespace qa;

TEST_CASE("shared state") {
    DensityMatrix rho = epr_state();
    CHECK(rho.mat.dim == 4);
    CHECK(std::abs(trace_product(rho.mat, rho.mat).real() - 1.0) <= 1e-14);  // pure

    DensityMatrix red = partial_trace_second(rho);
    CHECK(std::abs(red.mat.at(0, 0) - 0.5) <= 1e-15);
    CHECK(std::abs(red.mat.at(1, 1) - 0.5) <= 1e-15);
    CHECK(std::abs(red.mat.at(0, 1)) <= 1e-15);
}

TEST_CASE("three-effect reply measurement") {
    for (bool first : {true, false}) {
        auto effects = epr_effects(first);
        REQUIRE(effects.size() == 3);
        CHECK(effects[0].bundle == (first ? 1u : 2u));
        CHECK(effects[1].bundle == effects[0].bundle);
        CHECK(effects[2].bundle == 3u);
        CHECK(effects[0].payment == 3.0);
        CHECK(effects[1].payment == 0.0);

        CMat sum = CMat::zero(4);
        for (const auto& e : effects) {
            CHECK(min_eigenvalue(e.effect) >= -1e-12);
            sum = sum + e.effect;
        }
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                CHECK(std::abs(sum.at(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
}

TEST_CASE("rational tables are exact and match the doubles") {
    std::vector<std::vector<Rat>> total(4, std::vector<Rat>(4, Rat(0)));
    auto effects = epr_effects(true);
    for (int k = 0; k < 3; ++k) {
        auto tab = epr_effect_rational(k);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                total[static_cast<size_t>(i)][static_cast<size_t>(j)] += tab[static_cast<size_t>(i)][static_cast<size_t>(j)];
                CHECK(to_double(tab[static_cast<size_t>(i)][static_cast<size_t>(j)]) ==
                      effects[static_cast<size_t>(k)].effect.at(i, j).real());
            }
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(total[static_cast<size_t>(i)][static_cast<size_t>(j)] == Rat(i == j ? 1 : 0));
    CHECK_THROWS_AS(epr_effect_rational(3), std::invalid_argument);
}

TEST_CASE("reachable-state test") {
    CHECK(feasible(epr_state()));
    CHECK_FALSE(feasible(pure_density(basis_state(4, 0))));  // reduction is not I/2
    DensityMatrix two;
    two.mat = CMat::identity(2);
    CHECK_FALSE(feasible(two));

    for (double a : {0.0, 0.1, 0.25, 0.5}) CHECK(feasible(restricted_state(a)));
    CHECK_THROWS_AS(restricted_state(0.6), std::invalid_argument);
    CHECK_THROWS_AS(restricted_state(-0.1), std::invalid_argument);
}

TEST_CASE("diagonal-plus-corner projection preserves the objective") {
    RngStream rng(4242);
    for (int s = 0; s < 100; ++s) {
        DensityMatrix rho = random_feasible_state(rng);
        CHECK(feasible(rho));
        DensityMatrix proj = project_diag_corner(rho);
        CHECK(feasible(proj));
        for (double y : {0.0, 0.1, 0.5, 1.0}) {
            CMat c = c_matrix(y);
            double before = trace_product(rho.mat, c).real();
            double after = trace_product(proj.mat, c).real();
            CHECK(std::abs(before - after) <= 1e-15);
        }
    }
    DensityMatrix two;
    two.mat = CMat::identity(2);
    CHECK_THROWS_AS(project_diag_corner(two), std::invalid_argument);
}

TEST_CASE("objective matrix entries") {
    CMat c = c_matrix(0.0);
    CHECK(c.at(0, 0).real() == doctest::Approx(-0.45).epsilon(1e-15));
    CHECK(c.at(1, 1).real() == 0.0);
    CHECK(c.at(2, 2).real() == doctest::Approx(-1.2).epsilon(1e-15));
    CHECK(c.at(3, 3).real() == doctest::Approx(-1.2).epsilon(1e-15));
    CHECK(c.at(0, 3).real() == doctest::Approx(-0.3).epsilon(1e-15));
    CHECK(c.at(1, 2) == cplx(0.0));

    // the one-parameter family's objective is exactly <rho(alpha), c(y)>
    for (double y : {0.0, 0.3, 1.0})
        for (double a : {0.0, 0.1, 2.0 / 9.0, 0.5}) {
            double via_trace = trace_product(restricted_state(a).mat, c_matrix(y)).real();
            CHECK(std::abs(via_trace - alpha_objective(y, a)) <= 1e-12);
        }
}

TEST_CASE("closed-form maximizer") {
    AlphaChoice at0 = optimal_alpha(0.0);
    CHECK(at0.alpha == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
    CHECK(at0.value == doctest::Approx(-0.5).epsilon(1e-12));

    double knee = 4.0 / 15.0;
    AlphaChoice at_knee = optimal_alpha(knee);
    CHECK(at_knee.alpha == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(at_knee.value == doctest::Approx(-0.45).epsilon(1e-12));

    AlphaChoice at1 = optimal_alpha(1.0);
    CHECK(at1.alpha == 0.5);
    CHECK(at1.value == doctest::Approx(-39.0 / 160.0).epsilon(1e-12));

    // below the knee the value is the negated strip price
    for (int i = 0; i <= 100; ++i) {
        double y = knee * i / 100.0;
        CHECK(std::abs(optimal_alpha(y).value + (2.0 - 3.0 * y) / (4.0 - 5.0 * y)) <= 1e-12);
    }
    // past the knee it is the linear branch
    for (double y : {0.3, 0.6, 0.9})
        CHECK(optimal_alpha(y).value == doctest::Approx(9.0 * y / 32.0 - 21.0 / 40.0).epsilon(1e-12));

    CHECK_THROWS_AS(optimal_alpha(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(optimal_alpha(1.1), std::invalid_argument);
}

TEST_CASE("independent maximizers agree") {
    for (double y : {0.0, 0.1, 4.0 / 15.0, 0.5, 1.0}) {
        double closed = optimal_alpha(y).value;
        CHECK(std::abs(grid_oracle(y, 10000) - closed) <= 1e-4);
        CHECK(grid_oracle(y, 10000) <= closed + 1e-12);
    }
    CHECK_THROWS_AS(grid_oracle(0.5, 0), std::invalid_argument);

    RngStream rng(99);
    for (double y : {0.0, 0.5, 1.0}) {
        double sampled = random_state_oracle(y, 20, rng);
        CHECK(sampled <= optimal_alpha(y).value + 1e-10);
    }
}

TEST_CASE("protocol utility equals the iid 2(1-t) surface") {
    CanonicalPartition cp = ddt_partition();
    double worst = 0.0;
    for (int i = 0; i <= 60; ++i)
        for (int j = 0; j <= 60; ++j) {
            double x = i / 60.0, y = j / 60.0;
            worst = std::max(worst, std::abs(epr_protocol_utility(x, y) - optimal_utility(x, y, cp)));
            CHECK(epr_protocol_utility(x, y) == epr_protocol_utility(y, x));  // symmetric
        }
    CHECK(worst <= 1e-6);

    for (int i = 0; i <= 600; ++i) {
        double x = 0.06 * i / 600.0;
        CHECK(std::abs(epr_protocol_utility(x, 1.0) - ddt_top_edge_utility(x)) <= 1e-9);
    }
}
