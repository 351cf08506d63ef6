#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "qauction/matrix.hpp"
#include "qauction/rng.hpp"

using namespace qa;

namespace {

CMat hermitian_2x2(double a, double d, cplx b) {
    CMat m(2);
    m.at(0, 0) = a;
    m.at(1, 1) = d;
    m.at(0, 1) = b;
    m.at(1, 0) = std::conj(b);
    return m;
}

// independent closed form for 2x2 Hermitian eigenvalues
std::pair<double, double> eig2_oracle(double a, double d, cplx b) {
    double mid = 0.5 * (a + d);
    double rad = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    return {mid - rad, mid + rad};
}

}  // namespace

TEST_CASE("matrix arithmetic, adjoint, trace") {
    CMat x = CMat::from_real(2, {1, 2, 3, 4});
    CMat y = CMat::identity(2);
    CMat s = x + y;
    CHECK(s.at(0, 0) == cplx(2, 0));
    CHECK(s.at(1, 1) == cplx(5, 0));
    CMat d = x - y;
    CHECK(d.at(0, 0) == cplx(0, 0));
    CMat p = x * x;  // [[7,10],[15,22]]
    CHECK(p.at(0, 0) == cplx(7, 0));
    CHECK(p.at(1, 0) == cplx(15, 0));
    CHECK((2.0 * x).at(0, 1) == cplx(4, 0));

    CMat z(2);
    z.at(0, 1) = cplx(1, 2);
    CMat za = adjoint(z);
    CHECK(za.at(1, 0) == cplx(1, -2));
    CHECK(za.at(0, 1) == cplx(0, 0));

    CHECK(trace(x) == cplx(5, 0));
    // trace_product must agree with the explicit product's trace
    CHECK(std::abs(trace_product(x, x) - trace(x * x)) < 1e-14);

    CHECK_THROWS_AS(x + CMat::identity(3), std::invalid_argument);
    CHECK_THROWS_AS(CMat::from_real(2, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("hermiticity residual") {
    CHECK(hermiticity_residual(CMat::identity(4)) == 0.0);
    CHECK(hermiticity_residual(hermitian_2x2(1, 2, cplx(0.3, -0.4))) == 0.0);

    CMat bad(2);
    bad.at(0, 1) = cplx(1, 0);  // at(1,0) stays 0
    CHECK(hermiticity_residual(bad) == doctest::Approx(1.0));
}

TEST_CASE("density matrix validation") {
    CMat ok = CMat::from_real(2, {0.5, 0, 0, 0.5});
    CHECK_NOTHROW(make_density(ok));

    CMat skew(2);
    skew.at(0, 0) = 0.5;
    skew.at(1, 1) = 0.5;
    skew.at(0, 1) = cplx(0, 1e-3);
    skew.at(1, 0) = cplx(0, 1e-3);  // equal, not conjugate: not Hermitian
    CHECK_THROWS_AS(make_density(skew), std::invalid_argument);

    CMat indef = CMat::from_real(2, {1.5, 0, 0, -0.5});
    CHECK_THROWS_AS(make_density(indef), std::invalid_argument);

    CMat offtrace = CMat::from_real(2, {0.7, 0, 0, 0.7});
    CHECK_THROWS_AS(make_density(offtrace), std::invalid_argument);

    PureState plus;
    plus.dim = 2;
    double r = std::sqrt(0.5);
    plus.amp = {cplx(r, 0), cplx(r, 0)};
    CHECK(plus.norm_residual() < 1e-15);
    DensityMatrix rho = pure_density(plus);
    CHECK(std::abs(rho.mat.at(0, 1) - cplx(0.5, 0)) < 1e-15);

    PureState off = basis_state(2, 0);
    off.amp[0] = 0.9;
    CHECK_THROWS_AS(pure_density(off), std::invalid_argument);
    CHECK_THROWS_AS(basis_state(2, 2), std::invalid_argument);
}

TEST_CASE("eigen solver ordering and residual") {
    CMat h = hermitian_2x2(2, 2, cplx(1, 0));  // eigenvalues 1 and 3
    auto [lo, hi] = eig2_oracle(2, 2, cplx(1, 0));
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(3.0));

    EigPair top = eig_max(h);
    CHECK(top.value == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(min_eigenvalue(h) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<double> evs = eigenvalues(h);
    REQUIRE(evs.size() == 2);
    CHECK(evs[0] <= evs[1]);  // ascending

    // eigenvector residual ||H v - lambda v||
    double res = 0.0;
    for (int i = 0; i < 2; ++i) {
        cplx hv = 0.0;
        for (int j = 0; j < 2; ++j) hv += h.at(i, j) * top.vector.amp[j];
        res += std::norm(hv - top.value * top.vector.amp[i]);
    }
    CHECK(std::sqrt(res) < 1e-12);

    CMat nonherm(2);
    nonherm.at(0, 1) = 1.0;
    CHECK_THROWS_AS(eig_max(nonherm), std::invalid_argument);
}

TEST_CASE("Rayleigh quotient never beats the top eigenvalue") {
    RngStream rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = (trial % 2 == 0) ? 2 : 4;
        // random Hermitian via A + A^dagger
        CMat a(dim);
        for (auto& v : a.a) v = cplx(rng.next_gaussian(), rng.next_gaussian());
        CMat h = a + adjoint(a);
        double lmax = eig_max(h).value;
        PureState psi = random_pure(rng, dim);
        double quot = trace_product(psi.outer(), h).real();
        CHECK(quot <= lmax + 1e-9);
    }
}

TEST_CASE("partial trace of the second qubit") {
    // product state: rho (x) sigma reduces to rho
    CMat r1 = CMat::from_real(2, {0.7, 0.1, 0.1, 0.3});
    CMat r2 = CMat::from_real(2, {0.25, 0, 0, 0.75});
    CMat prod(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    prod.at(2 * i + k, 2 * j + l) = r1.at(i, j) * r2.at(k, l);
    DensityMatrix red = partial_trace_second(make_density(prod));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(std::abs(red.mat.at(i, j) - r1.at(i, j)) < 1e-14);

    // maximally entangled state reduces to I/2
    CMat epr(4);
    epr.at(0, 0) = epr.at(0, 3) = epr.at(3, 0) = epr.at(3, 3) = 0.5;
    DensityMatrix half = partial_trace_second(make_density(epr));
    CHECK(std::abs(half.mat.at(0, 0) - cplx(0.5, 0)) < 1e-15);
    CHECK(std::abs(half.mat.at(0, 1)) < 1e-15);

    DensityMatrix two;
    two.mat = CMat::from_real(2, {0.5, 0, 0, 0.5});
    CHECK_THROWS_AS(partial_trace_second(two), std::invalid_argument);
}

TEST_CASE("psd projection clips negative spectrum") {
    CMat indef = CMat::from_real(2, {1, 0, 0, -1});
    CMat proj = psd_projection(indef);
    CHECK(std::abs(proj.at(0, 0) - cplx(1, 0)) < 1e-14);
    CHECK(std::abs(proj.at(1, 1)) < 1e-14);

    RngStream rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        CMat a(4);
        for (auto& v : a.a) v = cplx(rng.next_gaussian(), rng.next_gaussian());
        CMat h = a + adjoint(a);
        CMat p = psd_projection(h);
        CHECK(min_eigenvalue(p) >= -1e-10);
        // idempotent up to solver noise
        CMat pp = psd_projection(p);
        double gap = 0.0;
        for (size_t k = 0; k < p.a.size(); ++k) gap = std::max(gap, std::abs(p.a[k] - pp.a[k]));
        CHECK(gap < 1e-10);
        // already-PSD input passes through
        CMat g = a * adjoint(a);
        CMat gp = psd_projection(g);
        double drift = 0.0;
        for (size_t k = 0; k < g.a.size(); ++k)
            drift = std::max(drift, std::abs(g.a[k] - gp.a[k]));
        CHECK(drift < 1e-9);
    }
}

TEST_CASE("trace distance identities and bound") {
    DensityMatrix e0 = pure_density(basis_state(2, 0));
    DensityMatrix e1 = pure_density(basis_state(2, 1));
    CHECK(trace_distance(e0, e1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trace_distance(e0, e0) == doctest::Approx(0.0));

    // diagonal states: trace distance is half the l1 distance
    DensityMatrix p, q;
    p.mat = CMat::from_real(4, {0.4, 0, 0, 0, 0, 0.3, 0, 0, 0, 0, 0.2, 0, 0, 0, 0, 0.1});
    q.mat = CMat::from_real(4, {0.1, 0, 0, 0, 0, 0.2, 0, 0, 0, 0, 0.3, 0, 0, 0, 0, 0.4});
    double l1 = 0.3 + 0.1 + 0.1 + 0.3;
    CHECK(trace_distance(p, q) == doctest::Approx(0.5 * l1).epsilon(1e-12));

    RngStream rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        int dim = (trial % 2 == 0) ? 2 : 4;
        DensityMatrix rho = random_density(rng, dim);
        DensityMatrix sigma = random_density(rng, dim);
        double t = trace_distance(rho, sigma);
        double overlap = trace_product(rho.mat, sigma.mat).real();
        CHECK(t <= std::sqrt(std::max(0.0, 1.0 - overlap)) + 1e-12);
        CHECK(t >= 0.0);
        CHECK(t <= 1.0);
    }
}

TEST_CASE("povm validation") {
    CMat f = CMat::from_real(2, {0.25, 0, 0, 0.75});
    Povm good{{f, CMat::identity(2) - f}};
    PovmReport rep = validate_povm(good);
    CHECK(rep.completeness_residual < 1e-15);
    CHECK(rep.psd_residuals[0] < 1e-15);
    CHECK(rep.valid());

    Povm empty;
    CHECK(validate_povm(empty).completeness_residual == doctest::Approx(1.0));
    CHECK_FALSE(validate_povm(empty).valid());

    CMat neg = CMat::from_real(2, {-0.1, 0, 0, 1.1});
    Povm with_neg{{neg, CMat::identity(2) - neg}};
    PovmReport nrep = validate_povm(with_neg);
    CHECK(nrep.completeness_residual < 1e-15);
    CHECK(nrep.psd_residuals[0] == doctest::Approx(0.1));
    CHECK_FALSE(nrep.valid());

    CMat skew(2);
    skew.at(0, 1) = 1.0;
    Povm with_skew{{skew, CMat::identity(2) - skew}};
    CHECK(validate_povm(with_skew).psd_residuals[0] >= 1.0);

    Povm mixed{{CMat::identity(2), CMat::identity(4)}};
    CHECK_THROWS_AS(validate_povm(mixed), std::invalid_argument);
}

TEST_CASE("outcome probabilities and Born sampling") {
    PureState psi;
    psi.dim = 2;
    psi.amp = {cplx(0.6, 0), cplx(0.8, 0)};
    DensityMatrix rho = pure_density(psi);
    Povm basis{{basis_state(2, 0).outer(), basis_state(2, 1).outer()}};

    std::vector<double> probs = outcome_probabilities(rho, basis);
    CHECK(probs[0] == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(probs[1] == doctest::Approx(0.64).epsilon(1e-12));

    Povm leaky{{basis_state(2, 0).outer()}};  // sums to |0><0|, not I
    CHECK_THROWS_AS(outcome_probabilities(rho, leaky), std::invalid_argument);
    Povm wrong_dim{{CMat::identity(4)}};
    CHECK_THROWS_AS(outcome_probabilities(rho, wrong_dim), std::invalid_argument);

    const long long shots = 200000;
    long long hits = 0;
    RngStream rng(5150);
    for (long long s = 0; s < shots; ++s)
        if (measure(rho, basis, rng) == 0) ++hits;
    double freq = static_cast<double>(hits) / shots;
    double sigma = std::sqrt(0.36 * 0.64 / shots);
    CHECK(std::abs(freq - 0.36) < 4.0 * sigma);
}

TEST_CASE("random states are valid and seed-deterministic") {
    RngStream a(9), b(9);
    PureState pa = random_pure(a, 4);
    PureState pb = random_pure(b, 4);
    CHECK(pa.norm_residual() < 1e-12);
    for (int i = 0; i < 4; ++i) CHECK(pa.amp[i] == pb.amp[i]);

    DensityMatrix da = random_density(a, 4);
    DensityMatrix db = random_density(b, 4);
    for (size_t k = 0; k < da.mat.a.size(); ++k) CHECK(da.mat.a[k] == db.mat.a[k]);
    CHECK(std::abs(trace(da.mat) - cplx(1, 0)) < 1e-12);
    CHECK(min_eigenvalue(da.mat) >= -1e-12);

    RngStream c(10);
    DensityMatrix dc = random_density(c, 4);
    bool same = true;
    for (size_t k = 0; k < da.mat.a.size(); ++k)
        if (da.mat.a[k] != dc.mat.a[k]) same = false;
    CHECK_FALSE(same);
}

TEST_CASE("power of two dimension gate") {
    CHECK(is_power_of_two_dim(2));
    CHECK(is_power_of_two_dim(4096));
    CHECK_FALSE(is_power_of_two_dim(1));
    CHECK_FALSE(is_power_of_two_dim(3));
    CHECK_FALSE(is_power_of_two_dim(8192));
}
