#include "qauction/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace qa {

double lambert_w(double z) {
    constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
    if (!(z > kBranchPoint)) throw std::invalid_argument("lambert_w: z must exceed -1/e");
    if (z == 0.0) return 0.0;

    double w;
    if (z < -0.25) {
        // series around the branch point in p = sqrt(2(ez + 1))
        double p = std::sqrt(2.0 * (std::exp(1.0) * z + 1.0));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else if (z < std::exp(1.0)) {
        w = std::log1p(z > 0.0 ? z : z / (1.0 + z));
    } else {
        double l1 = std::log(z), l2 = std::log(std::log(z));
        w = l1 - l2 + l2 / l1;
    }

    for (int i = 0; i < 50; ++i) {
        double ew = std::exp(w);
        double r = w * ew - z;
        if (std::abs(r) <= 1e-16 * (1.0 + std::abs(z))) break;
        double denom = ew * (w + 1.0) - (w + 2.0) * r / (2.0 * w + 2.0);
        double next = w - r / denom;
        if (next == w) break;
        w = next;
    }
    return w;
}

}  // namespace qa
