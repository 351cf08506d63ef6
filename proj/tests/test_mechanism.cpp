#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>

#include "qauction/mechanism.hpp"

using namespace qa;

namespace {

// posted price 0.6 on a single item, two types around the price
MechanismFile posted_price() {
    MechanismFile mf;
    mf.space.types = {additive_valuation({1.0}), additive_valuation({0.4})};
    mf.space.prior = {0.5, 0.5};
    mf.mech.n = 1;
    mf.mech.per_type = {
        {{1u, 0.6, 1.0}},
        {{0u, 0.0, 1.0}},
    };
    return mf;
}

}  // namespace

TEST_CASE("valuation kinds") {
    Valuation t = table_valuation(2, {0.0, 1.0, 2.0, 2.5});
    CHECK(t.value(0u) == 0.0);
    CHECK(t.value(3u) == 2.5);

    Valuation a = additive_valuation({1.0, 2.0});
    CHECK(a.value(0u) == 0.0);
    CHECK(a.value(1u) == 1.0);
    CHECK(a.value(3u) == 3.0);

    Valuation u = unit_demand_valuation({1.0, 2.0});
    CHECK(u.value(3u) == 2.0);
    CHECK(u.value(1u) == 1.0);

    CHECK_THROWS_AS(table_valuation(2, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("type space validation") {
    FiniteTypeSpace ts;
    ts.types = {additive_valuation({0.5, 0.5})};
    ts.prior = {1.0};
    CHECK_NOTHROW(validate_type_space(ts, 1.0));

    ts.prior = {0.9};
    CHECK_THROWS_AS(validate_type_space(ts, 1.0), std::invalid_argument);

    ts.prior = {1.0};
    ts.types = {additive_valuation({0.8, 0.8})};  // full bundle 1.6 > cap
    CHECK_THROWS_AS(validate_type_space(ts, 1.0), std::invalid_argument);

    ts.types = {unit_demand_valuation({-0.1})};
    CHECK_THROWS_AS(validate_type_space(ts, 1.0), std::invalid_argument);

    ts.types = {additive_valuation({0.5})};
    ts.prior = {0.5, 0.5};
    CHECK_THROWS_AS(validate_type_space(ts, 1.0), std::invalid_argument);
}

TEST_CASE("mechanism validation") {
    Mechanism m;
    m.n = 1;
    m.per_type = {{{1u, 0.5, 0.5}, {0u, 0.0, 0.5}}};
    CHECK_NOTHROW(validate_mechanism(m, 1.0));

    m.per_type = {{{1u, 0.5, 0.6}, {0u, 0.0, 0.5}}};  // probs sum to 1.1
    CHECK_THROWS_AS(validate_mechanism(m, 1.0), std::invalid_argument);

    m.per_type = {{{1u, 1.5, 1.0}}};  // payment above cap
    CHECK_THROWS_AS(validate_mechanism(m, 1.0), std::invalid_argument);
}

TEST_CASE("binary payment normalization keeps marginals and payments") {
    Mechanism m;
    m.n = 2;
    m.per_type = {
        {{3u, 0.7, 0.5}, {1u, 0.2, 0.3}, {0u, 0.0, 0.2}},
        {{1u, 0.35, 1.0}},
    };
    double U = 1.0;
    Mechanism norm = normalize_binary_payments(m, U);
    REQUIRE(norm.per_type.size() == 2);

    for (size_t t = 0; t < m.per_type.size(); ++t) {
        CHECK(expected_payment(norm, static_cast<int>(t)) ==
              doctest::Approx(expected_payment(m, static_cast<int>(t))).epsilon(1e-12));

        std::map<uint32_t, double> before, after;
        for (const Outcome& o : m.per_type[t]) before[o.bundle] += o.prob;
        for (const Outcome& o : norm.per_type[t]) {
            after[o.bundle] += o.prob;
            bool binary = std::abs(o.payment) < 1e-15 || std::abs(o.payment - U) < 1e-15;
            CHECK(binary);
        }
        for (const auto& [bundle, p] : before)
            CHECK(after[bundle] == doctest::Approx(p).epsilon(1e-12));
    }

    Mechanism rich;
    rich.n = 1;
    rich.per_type = {{{1u, 1.4, 1.0}}};
    CHECK_THROWS_AS(normalize_binary_payments(rich, 1.0), std::invalid_argument);
}

TEST_CASE("ic and ir checks") {
    MechanismFile mf = posted_price();
    IcReport ic = check_ic(mf.mech, mf.space, 1e-9);
    // high type keeps the item: 1 - 0.6 = 0.4 > 0 (deviating to the empty
    // lottery yields 0); low type gains nothing from buying at 0.6
    CHECK(ic.worst_violation == doctest::Approx(0.0));
    CHECK(ic.pass);
    IcReport ir = check_ir(mf.mech, mf.space, 1e-9);
    CHECK(ir.worst_violation == doctest::Approx(0.0));
    CHECK(ir.pass);

    // overcharge the high type past its deviation value: IC breaks by 0.3
    MechanismFile bad = posted_price();
    bad.mech.per_type[1] = {{1u, 0.3, 1.0}};
    IcReport broken = check_ic(bad.mech, bad.space, 1e-9);
    CHECK(broken.worst_violation == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(broken.worst_type == 0);
    CHECK(broken.worst_report == 1);
    CHECK_FALSE(broken.pass);

    // charging above value breaks IR
    MechanismFile unfair = posted_price();
    unfair.mech.per_type[1] = {{0u, 0.2, 1.0}};
    IcReport ir2 = check_ir(unfair.mech, unfair.space, 1e-9);
    CHECK(ir2.worst_violation == doctest::Approx(0.2).epsilon(1e-12));
    CHECK_FALSE(ir2.pass);
}

TEST_CASE("expected payment, utility, revenue") {
    MechanismFile mf = posted_price();
    CHECK(expected_payment(mf.mech, 0) == doctest::Approx(0.6));
    CHECK(expected_payment(mf.mech, 1) == doctest::Approx(0.0));
    CHECK(expected_utility(mf.mech, mf.space, 0, 0) == doctest::Approx(0.4));
    CHECK(expected_utility(mf.mech, mf.space, 1, 0) == doctest::Approx(-0.2));
    CHECK(expected_revenue(mf.mech, mf.space) == doctest::Approx(0.3));
}

TEST_CASE("menu selection is utility-maximizing with low-index ties") {
    FiniteTypeSpace ts;
    ts.types = {additive_valuation({1.0}), additive_valuation({0.5}),
                additive_valuation({0.2})};
    ts.prior = {0.4, 0.4, 0.2};

    std::vector<std::vector<Outcome>> menu = {
        {{0u, 0.0, 1.0}},                    // walk away
        {{1u, 0.5, 0.5}, {0u, 0.0, 0.5}},    // half lottery at 0.5
        {{1u, 0.75, 1.0}},                   // buy at 0.75
    };
    Mechanism m = mechanism_from_menu(1, menu, ts);

    // value 1: entry 1 gives 0.25, entry 2 gives 0.25 -> tie keeps index 1,
    // and entry 0 (zero) loses; the chosen lottery must be menu[1]
    REQUIRE(m.per_type[0].size() == 2);
    CHECK(m.per_type[0][0].payment == doctest::Approx(0.5));
    // value 0.5: entry 1 gives 0, entry 0 gives 0 -> tie keeps index 0
    CHECK(m.per_type[1].size() == 1);
    CHECK(m.per_type[1][0].bundle == 0u);
    // value 0.2: walk away
    CHECK(m.per_type[2][0].bundle == 0u);

    IcReport ic = check_ic(m, ts, 1e-12);
    CHECK(ic.pass);

    CHECK_THROWS_AS(mechanism_from_menu(1, {}, ts), std::invalid_argument);
}

TEST_CASE("mechanism json round trip") {
    MechanismFile mf;
    mf.space.types = {table_valuation(2, {0.0, 0.3, 0.5, 0.9}),
                      additive_valuation({0.2, 0.4}),
                      unit_demand_valuation({0.6, 0.7})};
    mf.space.prior = {0.25, 0.5, 0.25};
    mf.mech.n = 2;
    mf.mech.per_type = {
        {{3u, 0.8, 1.0}},
        {{1u, 0.0, 0.5}, {2u, 0.25, 0.5}},
        {{0u, 0.0, 1.0}},
    };

    MechanismFile back = load_mechanism_json(save_mechanism_json(mf));
    REQUIRE(back.space.types.size() == 3);
    CHECK(back.space.types[0].kind == Valuation::Kind::table);
    CHECK(back.space.types[1].kind == Valuation::Kind::additive);
    CHECK(back.space.types[2].kind == Valuation::Kind::unit_demand);
    CHECK(back.space.types[0].table == mf.space.types[0].table);
    CHECK(back.space.prior == mf.space.prior);
    REQUIRE(back.mech.per_type.size() == 3);
    CHECK(back.mech.per_type[0][0].bundle == 3u);
    CHECK(back.mech.per_type[1][1].bundle == 2u);
    CHECK(back.mech.per_type[1][1].payment == doctest::Approx(0.25));

    // item index outside n must be rejected
    std::string bad = R"({"n":1,"types":[{"items":[1.0],"combiner":"additive"}],
                          "prior":[1.0],
                          "outcomes":{"0":[{"bundle":[1],"payment":0,"prob":1.0}]}})";
    CHECK_THROWS_AS(load_mechanism_json(bad), std::invalid_argument);
}
