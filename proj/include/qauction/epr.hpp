#pragma once

#include <cstdint>
#include <vector>

#include "qauction/matrix.hpp"
#include "qauction/rational.hpp"
#include "qauction/rng.hpp"

namespace qa {

// Barely-interactive protocol: the seller shares half of an entangled pair,
// the buyer replies with a qubit plus two bits. Bits (0,0) end with nothing
// for free, (1,1) with both items at the DDT critical price; mixed bits hand
// the two-qubit joint state to a labeled POVM whose single-item bundle is
// the item named by the set bit.

DensityMatrix epr_state();

struct EprEffect {
    CMat effect;
    uint32_t bundle = 0;
    double payment = 0.0;
};

// The three labeled effects of the mixed-bit branch. first_item_set picks
// which single item the first two effects award: true for bits (1,0)
// (item 1), false for (0,1) (item 2).
std::vector<EprEffect> epr_effects(bool first_item_set);

// Same effects as exact fractions (row-major 4x4), so completeness can be
// checked entrywise with no rounding at all.
std::vector<std::vector<Rat>> epr_effect_rational(int index);

// Strategy space reachable by the buyer: PSD, and first-qubit reduction I/2.
bool feasible(const DensityMatrix& rho, double tol = 1e-10);

// Zero all entries except the diagonal and the two corners. Feasibility and
// every objective <rho, c_matrix(y)> survive this projection.
DensityMatrix project_diag_corner(const DensityMatrix& rho);

// Objective matrix of the mixed-bit branch after the buyer's item value x is
// split off: c = y A3 - 3 A1 (diagonal plus corners only).
CMat c_matrix(double y);

// diag(alpha, 1/2 - alpha, 0, 1/2) with corners -sqrt(alpha/2); feasible for
// every alpha in [0, 1/2], and optimal within that family.
DensityMatrix restricted_state(double alpha);

double alpha_objective(double y, double alpha);

struct AlphaChoice {
    double alpha = 0.0;
    double value = 0.0;  // max_rho <rho, c_matrix(y)>, i.e. branch utility minus x
};

// Closed form: alpha* = min(1/2, 9 / (200 c^2)) while c = 9y/16 - 9/20 is
// negative, else 1/2. Value (2-3y)/(5y-4) up to the knee at y = 4/15, then
// 9y/32 - 21/40.
AlphaChoice optimal_alpha(double y);

// Independent maxima for cross-checking the closed form: a dense alpha grid,
// and random feasible states pushed through project_diag_corner.
double grid_oracle(double y, int n);
DensityMatrix random_feasible_state(RngStream& rng);
double random_state_oracle(double y, int samples, RngStream& rng);

// max(0, x + value(y), y + value(x), x + y - P_crit) with the DDT critical
// price; matches the DDT optimal utility surface.
double epr_protocol_utility(double x, double y);

}  // namespace qa
