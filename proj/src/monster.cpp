#include "qauction/monster.hpp"

#include <cmath>
#include <stdexcept>

#include "qauction/quadrature.hpp"

namespace qa {

namespace {

const double kSq5737 = std::sqrt(5737.0);
const double kExpA = -75.0 / 58.0 - 7551.0 / (58.0 * kSq5737);
const double kExpC = -75.0 / 58.0 + 7551.0 / (58.0 * kSq5737);

struct Radicals {
    double g, a, b, c, d;
};

Radicals radicals(double y) {
    Radicals r;
    r.g = std::sqrt(4.0 * y * y - 40.0 * y + 121.0);
    r.a = -6.0 * r.g + 12.0 * y + kSq5737 + 5.0;
    r.b = r.g - 2.0 * y + 10.0;
    r.c = 6.0 * r.g - 12.0 * y + kSq5737 - 5.0;
    r.d = 11.0 - 2.0 * y + r.g;
    return r;
}

double f2_raw(double y) {
    Radicals r = radicals(y);
    return std::pow(r.a, kExpA) * r.b * r.b * r.b * std::pow(r.c, kExpC) /
           std::pow(r.d, 99.0 / 29.0);
}

// d/dy log f2, assembled from the per-factor log derivatives
double f2_log_prime(double y) {
    Radicals r = radicals(y);
    double gp = (4.0 * y - 20.0) / r.g;
    double ap = -6.0 * gp + 12.0;
    double bp = gp - 2.0;
    double cp = 6.0 * gp - 12.0;
    double dp = gp - 2.0;
    return kExpA * ap / r.a + 3.0 * bp / r.b + kExpC * cp / r.c - (99.0 / 29.0) * dp / r.d;
}

}  // namespace

double monster_normalization() {
    static const double c = 1.0 / integrate(f2_raw, 0.0, 1.0, 1e-12);
    return c;
}

double monster_f2(double y) {
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("y outside [0,1]");
    return monster_normalization() * f2_raw(y);
}

double monster_f2_prime(double y) { return monster_f2(y) * f2_log_prime(y); }

double monster_s1(double y) {
    return 49.0 / 24.0 - (3.0 * y + std::sqrt(121.0 / 4.0 - 10.0 * y + y * y)) / 4.0;
}

Prior1D monster_prior() { return {"monster", monster_f2, monster_f2_prime}; }

namespace {

double mu_y(double y) { return 3.0 * monster_f2(y) + y * monster_f2_prime(y); }

CanonicalPartition solve_partition() {
    CanonicalPartition cp;
    cp.label = "monster";
    cp.s1 = monster_s1;

    double f2_at_1 = monster_f2(1.0);
    double s2 = find_root(
        [&](double s) { return integrate(mu_y, s, 1.0, 1e-11) - f2_at_1; }, 0.3, 0.8, 1e-11);
    cp.s2 = [s2](double) { return s2; };

    // Z-mass as a function of the candidate price P; the section width
    // min(s1(y), P - y) switches branches at most once on [0, s2].
    auto z_mass = [&](double p) {
        auto phi = [&](double y) { return monster_s1(y) - (p - y); };
        auto section = [&](double y) {
            double w = std::min(monster_s1(y), p - y);
            return w <= 0.0 ? 0.0 : mu_y(y) * w;
        };
        double split = s2;
        if (phi(0.0) < 0.0 && phi(s2) > 0.0) split = find_root(phi, 0.0, s2, 1e-12);
        double total = integrate(section, 0.0, split, 1e-10);
        if (split < s2) total += integrate(section, split, s2, 1e-10);
        return total;
    };
    cp.p_crit = find_root([&](double p) { return z_mass(p) - 1.0; }, 0.5, 0.8, 1e-11);
    cp.x_crit = cp.p_crit - s2;
    cp.y_crit = find_root([&](double y) { return monster_s1(y) - (cp.p_crit - y); }, 0.0, 0.05,
                          1e-12);
    return cp;
}

}  // namespace

const CanonicalPartition& monster_partition() {
    static const CanonicalPartition cp = solve_partition();
    return cp;
}

}  // namespace qa
