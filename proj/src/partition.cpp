#include "qauction/partition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qauction/lambert.hpp"
#include "qauction/quadrature.hpp"

namespace qa {

Prior1D uniform_prior() {
    return {"uniform", [](double) { return 1.0; }, [](double) { return 0.0; }};
}

Prior1D beta12_prior() {
    return {"beta12", [](double t) { return 2.0 * (1.0 - t); }, [](double) { return -2.0; }};
}

Prior1D exponential_prior() {
    double norm = 1.0 - std::exp(-1.0);
    return {"exponential", [norm](double t) { return std::exp(-t) / norm; },
            [norm](double t) { return -std::exp(-t) / norm; }};
}

double mu(double x, double y, const Prior1D& f1, const Prior1D& f2) {
    return 3.0 * f1.pdf(x) * f2.pdf(y) + x * f1.dpdf(x) * f2.pdf(y) +
           y * f2.dpdf(y) * f1.pdf(x);
}

const char* region_name(Region r) {
    switch (r) {
        case Region::Z: return "Z";
        case Region::A: return "A";
        case Region::B: return "B";
        case Region::W: return "W";
    }
    return "?";
}

Region classify(double x, double y, const CanonicalPartition& cp) {
    if (x <= cp.s1(y) && y <= cp.s2(x) && x + y <= cp.p_crit) return Region::Z;
    if (x < cp.x_crit) return Region::A;
    if (y < cp.y_crit) return Region::B;
    return Region::W;
}

double optimal_utility(double x, double y, const CanonicalPartition& cp) {
    return std::max({0.0, x - cp.s1(y), y - cp.s2(x), x + y - cp.p_crit});
}

namespace {

// Price curves use values > 1 to mark an inactive branch; slope and
// concavity checks only apply where the curve is live.
void curve_checks(const std::function<double(double)>& s, int grid, double& slope_violation,
                  double& concavity_violation) {
    double h = 1.0 / grid;
    std::vector<double> v(grid + 1);
    for (int i = 0; i <= grid; ++i) v[i] = s(i * h);
    auto active = [&](int i) { return v[i] <= 1.0 + 1e-9; };
    for (int i = 0; i < grid; ++i) {
        if (!active(i) || !active(i + 1)) continue;
        double slope = (v[i + 1] - v[i]) / h;
        slope_violation = std::max({slope_violation, slope, -1.0 - slope});
    }
    for (int i = 1; i < grid; ++i) {
        if (!active(i - 1) || !active(i) || !active(i + 1)) continue;
        concavity_violation = std::max(concavity_violation, v[i - 1] - 2.0 * v[i] + v[i + 1]);
    }
}

}  // namespace

PartitionConsistency check_partition(const CanonicalPartition& cp, int grid) {
    if (grid < 8) throw std::invalid_argument("grid too coarse");
    PartitionConsistency out;
    curve_checks(cp.s1, grid, out.slope_violation, out.concavity_violation);
    curve_checks(cp.s2, grid, out.slope_violation, out.concavity_violation);
    out.x_crit_residual = std::abs(cp.s2(cp.x_crit) - (cp.p_crit - cp.x_crit));
    out.y_crit_residual = std::abs(cp.s1(cp.y_crit) - (cp.p_crit - cp.y_crit));
    return out;
}

bool GkReport::pass(const Tolerances& tol) const {
    return min_mu > 0.0 && std::abs(z_mass - 1.0) <= tol.gk_residual &&
           strip_residual_y <= tol.gk_residual && strip_residual_x <= tol.gk_residual;
}

GkReport check_gk(const CanonicalPartition& cp, const Prior1D& f1, const Prior1D& f2,
                  const Tolerances&, int grid) {
    if (grid < 8) throw std::invalid_argument("grid too coarse");
    GkReport rep;

    rep.min_mu = mu(0.0, 0.0, f1, f2);
    for (int i = 0; i <= grid; ++i)
        for (int j = 0; j <= grid; ++j)
            rep.min_mu = std::min(rep.min_mu,
                                  mu(static_cast<double>(i) / grid,
                                     static_cast<double>(j) / grid, f1, f2));

    // the x-section of Z at height y is [0, x_max(y)]
    auto x_bound = [&](double y) {
        if (cp.s2(1.0) >= y) return 1.0;
        if (cp.s2(0.0) < y) return 0.0;
        return find_root([&](double x) { return cp.s2(x) - y; }, 0.0, 1.0, 1e-12);
    };
    auto x_max = [&](double y) {
        return std::clamp(std::min({cp.s1(y), cp.p_crit - y, x_bound(y)}), 0.0, 1.0);
    };
    auto z_section = [&](double y) {
        double xm = x_max(y);
        if (xm <= 0.0) return 0.0;
        return integrate([&](double x) { return mu(x, y, f1, f2); }, 0.0, xm, 1e-10);
    };
    double y_top = std::min(1.0, cp.p_crit);
    std::vector<double> knots{0.0, y_top};
    if (cp.y_crit > 0.0 && cp.y_crit < y_top) knots.insert(knots.end() - 1, cp.y_crit);
    double s2_edge = std::min(cp.s2(0.0), y_top);
    if (s2_edge > 0.0 && s2_edge < y_top) knots.insert(knots.end() - 1, s2_edge);
    std::sort(knots.begin(), knots.end());
    rep.z_mass = 0.0;
    for (size_t k = 0; k + 1 < knots.size(); ++k)
        rep.z_mass += integrate(z_section, knots[k], knots[k + 1], 1e-9);

    auto strip_y = [&](double y) {
        double lo = cp.s1(y);
        double rhs = f1.pdf(1.0) * f2.pdf(y);
        if (lo >= 1.0) return std::abs(rhs);
        double val = integrate([&](double x) { return mu(x, y, f1, f2); }, lo, 1.0, 1e-10);
        return std::abs(val - rhs);
    };
    auto strip_x = [&](double x) {
        double lo = cp.s2(x);
        double rhs = f1.pdf(x) * f2.pdf(1.0);
        if (lo >= 1.0) return std::abs(rhs);
        double val = integrate([&](double y) { return mu(x, y, f1, f2); }, lo, 1.0, 1e-10);
        return std::abs(val - rhs);
    };
    rep.strip_residual_y = 0.0;
    rep.strip_residual_x = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double t = static_cast<double>(i) / grid;
        rep.strip_residual_y = std::max(rep.strip_residual_y, strip_y(t * cp.y_crit));
        rep.strip_residual_x = std::max(rep.strip_residual_x, strip_x(t * cp.x_crit));
    }
    return rep;
}

AllocationPayment allocation_payment(const std::function<double(double, double)>& u,
                                     const CanonicalPartition& cp, double x, double y, double h) {
    if (h <= 0.0) throw std::invalid_argument("step must be positive");
    Region r0 = classify(x, y, cp);
    const double probes[4][2] = {{x - h, y}, {x + h, y}, {x, y - h}, {x, y + h}};
    for (const auto& p : probes) {
        if (p[0] < 0.0 || p[0] > 1.0 || p[1] < 0.0 || p[1] > 1.0 ||
            classify(p[0], p[1], cp) != r0)
            throw std::invalid_argument("point is within h of a region boundary");
    }
    AllocationPayment ap;
    ap.alloc1 = (u(x + h, y) - u(x - h, y)) / (2.0 * h);
    ap.alloc2 = (u(x, y + h) - u(x, y - h)) / (2.0 * h);
    auto snap = [](double a) {
        if (a > -1e-6 && a < 0.0) return 0.0;
        if (a > 1.0 && a < 1.0 + 1e-6) return 1.0;
        return a;
    };
    ap.alloc1 = snap(ap.alloc1);
    ap.alloc2 = snap(ap.alloc2);
    ap.payment = ap.alloc1 * x + ap.alloc2 * y - u(x, y);
    return ap;
}

namespace {

double curve_slope(const std::function<double(double)>& s, double t) {
    double h = 1e-5;
    double lo = std::max(0.0, t - h), hi = std::min(1.0, t + h);
    return (s(hi) - s(lo)) / (hi - lo);
}

}  // namespace

double characterization_revenue(const CanonicalPartition& cp, const Prior1D& f1,
                                const Prior1D& f2) {
    auto payment = [&](double x, double y) {
        switch (classify(x, y, cp)) {
            case Region::Z: return 0.0;
            case Region::A: return cp.s2(x) - x * curve_slope(cp.s2, x);
            case Region::B: return cp.s1(y) - y * curve_slope(cp.s1, y);
            case Region::W: return cp.p_crit;
        }
        return 0.0;
    };
    auto inner = [&](double y) {
        // payment(., y) is piecewise smooth; split at the candidate
        // region-boundary abscissae so each segment integrates cleanly
        std::vector<double> cuts{0.0, 1.0};
        auto add = [&](double c) {
            if (c > 1e-12 && c < 1.0 - 1e-12) cuts.push_back(c);
        };
        add(cp.x_crit);
        add(cp.s1(y));
        add(cp.p_crit - y);
        std::sort(cuts.begin(), cuts.end());
        double total = 0.0;
        for (size_t k = 0; k + 1 < cuts.size(); ++k)
            total += integrate([&](double x) { return payment(x, y) * f1.pdf(x); }, cuts[k],
                               cuts[k + 1], 2e-9);
        return total * f2.pdf(y);
    };
    double split = std::clamp(cp.y_crit, 0.0, 1.0);
    double rev = integrate(inner, 0.0, split, 1e-7);
    rev += integrate(inner, split, 1.0, 1e-7);
    return rev;
}

CanonicalPartition ddt_partition() {
    auto curve = [](double t) {
        return t <= 4.0 / 15.0 ? (2.0 - 3.0 * t) / (4.0 - 5.0 * t) : 2.0;
    };
    CanonicalPartition cp;
    cp.label = "beta12";
    cp.s1 = curve;
    cp.s2 = curve;
    cp.p_crit = 0.5535;
    cp.x_crit = find_root([&](double x) { return curve(x) - (cp.p_crit - x); }, 0.0, 4.0 / 15.0,
                          1e-12);
    cp.y_crit = cp.x_crit;
    return cp;
}

double ddt_top_edge_utility(double x) {
    if (x < 0.0 || x > 4.0 / 15.0) throw std::invalid_argument("outside the live branch");
    return (2.0 - 2.0 * x) / (4.0 - 5.0 * x);
}

double exp_prior_utility(double x) {
    if (x < 0.0 || x > 0.1) throw std::invalid_argument("stated only on [0, 0.1]");
    return 2.0 * x + lambert_w(std::exp(1.0 - x) * (2.0 - x)) - 1.0;
}

double exp_prior_strip_price(double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("x outside [0,1]");
    return 2.0 - x - lambert_w(std::exp(1.0 - x) * (2.0 - x));
}

}  // namespace qa
