#pragma once

#include <stdexcept>
#include <string>

namespace qa {

// Central numeric tolerances. The "strict" profile tightens the partition
// residual gate; everything else is shared. Reports echo the active profile
// so a stored artifact records which gates it was checked against.
struct Tolerances {
    std::string profile = "default";

    double hermiticity = 1e-12;
    double psd = 1e-12;          // eigenvalue floor: lambda >= -psd
    double trace_one = 1e-12;
    double eig_residual = 1e-9;
    double prob_sum = 1e-9;
    double gk_residual = 1e-3;
    double quadrature_abs = 1e-8;
    double root_bisect = 1e-10;
    double lambert_residual = 1e-13;
    double derivative_step = 1e-5;

    static Tolerances named(const std::string& profile) {
        Tolerances t;
        t.profile = profile;
        if (profile == "default") return t;
        if (profile == "strict") {
            t.gk_residual = 1e-6;
            return t;
        }
        throw std::invalid_argument("unknown tolerance profile: " + profile);
    }
};

}  // namespace qa
