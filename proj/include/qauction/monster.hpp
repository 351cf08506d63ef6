#pragma once

// Single construction that seeds the verify-oneway tables: a closed-form
// item-2 density whose canonical partition has a constant item-2 price and a
// price curve s1 solving (1 - s1(y)) * (3 f(y) + y f'(y)) = f(y).

#include "qauction/partition.hpp"

namespace qa {

// Normalized density on [0,1]. Built from radicals of g(y) = sqrt(4y^2 - 40y + 121);
// the normalization constant is computed once and cached.
double monster_f2(double y);
double monster_f2_prime(double y);
double monster_normalization();

// 49/24 - (3y + sqrt(121/4 - 10y + y^2)) / 4, decreasing from 2/3.
double monster_s1(double y);

Prior1D monster_prior();

// Full partition: s1 closed form, s2 constant (root of the one-sided strip
// condition), p_crit from unit Z-mass, corners from the boundary equations.
// Solved once, cached. Reference values: s2 ~ 0.558, p_crit ~ 0.669,
// x_crit ~ 0.111, y_crit ~ 0.005.
const CanonicalPartition& monster_partition();

}  // namespace qa
