#include "qauction/epr.hpp"

#include <cmath>
#include <stdexcept>

#include "qauction/partition.hpp"

namespace qa {

DensityMatrix epr_state() {
    CMat m(4);
    m.at(0, 0) = m.at(0, 3) = m.at(3, 0) = m.at(3, 3) = 0.5;
    return make_density(m);
}

namespace {

// {numerator, denominator} row-major tables; doubles are derived from these
struct Frac {
    long long n, d;
};

const Frac kEffects[3][16] = {
    {{3, 20}, {0, 1}, {0, 1}, {1, 10},
     {0, 1}, {0, 1}, {0, 1}, {0, 1},
     {0, 1}, {0, 1}, {2, 5}, {0, 1},
     {1, 10}, {0, 1}, {0, 1}, {2, 5}},
    {{23, 80}, {0, 1}, {0, 1}, {-1, 10},
     {0, 1}, {1, 1}, {0, 1}, {0, 1},
     {0, 1}, {0, 1}, {3, 5}, {0, 1},
     {-1, 10}, {0, 1}, {0, 1}, {3, 5}},
    {{9, 16}, {0, 1}, {0, 1}, {0, 1},
     {0, 1}, {0, 1}, {0, 1}, {0, 1},
     {0, 1}, {0, 1}, {0, 1}, {0, 1},
     {0, 1}, {0, 1}, {0, 1}, {0, 1}},
};

CMat effect_matrix(int index) {
    CMat m(4);
    for (int k = 0; k < 16; ++k)
        m.a[static_cast<size_t>(k)] =
            static_cast<double>(kEffects[index][k].n) / kEffects[index][k].d;
    return m;
}

}  // namespace

std::vector<EprEffect> epr_effects(bool first_item_set) {
    uint32_t single = first_item_set ? 1u : 2u;
    return {{effect_matrix(0), single, 3.0},
            {effect_matrix(1), single, 0.0},
            {effect_matrix(2), 3u, 0.0}};
}

std::vector<std::vector<Rat>> epr_effect_rational(int index) {
    if (index < 0 || index > 2) throw std::invalid_argument("effect index out of range");
    std::vector<std::vector<Rat>> rows(4, std::vector<Rat>(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Frac& f = kEffects[index][i * 4 + j];
            rows[i][j] = Rat(f.n) / f.d;
        }
    return rows;
}

bool feasible(const DensityMatrix& rho, double tol) {
    if (rho.mat.dim != 4) return false;
    if (min_eigenvalue(rho.mat) < -tol) return false;
    // first-qubit reduction, entrywise against I/2
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            cplx red = rho.mat.at(2 * i, 2 * j) + rho.mat.at(2 * i + 1, 2 * j + 1);
            cplx want = (i == j) ? cplx(0.5, 0.0) : cplx(0.0, 0.0);
            if (std::abs(red - want) > tol) return false;
        }
    return true;
}

DensityMatrix project_diag_corner(const DensityMatrix& rho) {
    if (rho.mat.dim != 4) throw std::invalid_argument("expected a two-qubit state");
    CMat m(4);
    for (int i = 0; i < 4; ++i) m.at(i, i) = rho.mat.at(i, i);
    m.at(0, 3) = rho.mat.at(0, 3);
    m.at(3, 0) = rho.mat.at(3, 0);
    DensityMatrix out;
    out.mat = m;  // PSD follows from the 2x2 corner minor; skip the full gate
    return out;
}

CMat c_matrix(double y) {
    CMat m(4);
    m.at(0, 0) = 9.0 * y / 16.0 - 9.0 / 20.0;
    m.at(2, 2) = -6.0 / 5.0;
    m.at(3, 3) = -6.0 / 5.0;
    m.at(0, 3) = -3.0 / 10.0;
    m.at(3, 0) = -3.0 / 10.0;
    return m;
}

DensityMatrix restricted_state(double alpha) {
    if (alpha < 0.0 || alpha > 0.5) throw std::invalid_argument("alpha outside [0, 1/2]");
    CMat m(4);
    m.at(0, 0) = alpha;
    m.at(1, 1) = 0.5 - alpha;
    m.at(3, 3) = 0.5;
    m.at(0, 3) = m.at(3, 0) = -std::sqrt(alpha / 2.0);
    return make_density(m);
}

double alpha_objective(double y, double alpha) {
    double c = 9.0 * y / 16.0 - 9.0 / 20.0;
    return c * alpha + 0.6 * std::sqrt(alpha / 2.0) - 0.6;
}

AlphaChoice optimal_alpha(double y) {
    if (y < 0.0 || y > 1.0) throw std::invalid_argument("y outside [0,1]");
    double c = 9.0 * y / 16.0 - 9.0 / 20.0;
    AlphaChoice out;
    out.alpha = c < 0.0 ? std::min(0.5, 9.0 / (200.0 * c * c)) : 0.5;
    out.value = alpha_objective(y, out.alpha);
    return out;
}

double grid_oracle(double y, int n) {
    if (n < 1) throw std::invalid_argument("grid must have at least two points");
    double best = alpha_objective(y, 0.0);
    for (int i = 1; i <= n; ++i) best = std::max(best, alpha_objective(y, 0.5 * i / n));
    return best;
}

namespace {

CMat kron_with_half_identity(const CMat& two) {
    CMat m(4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) m.at(2 * i + k, 2 * j + k) = 0.5 * two.at(i, j);
    return m;
}

}  // namespace

DensityMatrix random_feasible_state(RngStream& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        DensityMatrix seed = random_density(rng, 4);
        DensityMatrix red = partial_trace_second(seed);
        CMat delta(2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                delta.at(i, j) = (i == j ? cplx(0.5, 0.0) : cplx(0.0, 0.0)) - red.mat.at(i, j);
        // the tensored correction restores the first-qubit reduction exactly;
        // the projection then costs feasibility only when it actually clips,
        // and those draws fail the final check and are thrown away
        CMat candidate = psd_projection(seed.mat + kron_with_half_identity(delta));
        double tr = trace(candidate).real();
        if (tr <= 0.0) continue;
        candidate = (1.0 / tr) * candidate;
        DensityMatrix out;
        out.mat = candidate;
        if (feasible(out)) return out;
    }
    throw std::runtime_error("no feasible state found in 100 attempts");
}

double random_state_oracle(double y, int samples, RngStream& rng) {
    CMat c = c_matrix(y);
    double best = -1e300;
    for (int s = 0; s < samples; ++s) {
        DensityMatrix rho = project_diag_corner(random_feasible_state(rng));
        best = std::max(best, trace_product(rho.mat, c).real());
    }
    return best;
}

double epr_protocol_utility(double x, double y) {
    static const double p_crit = ddt_partition().p_crit;
    double u1 = x + optimal_alpha(y).value;
    double u2 = y + optimal_alpha(x).value;
    return std::max({0.0, u1, u2, x + y - p_crit});
}

}  // namespace qa
