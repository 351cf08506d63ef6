#pragma once

#include <functional>

namespace qa {

// Adaptive composite Simpson integration of f over [a, b] to an absolute
// tolerance. Integrands here are smooth away from region boundaries; callers
// split at known kinks.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-8);

// Bisection root of f on [lo, hi]; when the initial endpoints do not
// straddle a sign change the bracket is widened a few times before giving
// up. Throws std::runtime_error when no bracket is found.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-10);

}  // namespace qa
