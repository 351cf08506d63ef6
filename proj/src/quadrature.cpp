#include "qauction/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace qa {

namespace {

struct Simpson {
    const std::function<double(double)>& f;

    double segment(double a, double fa, double, double fm, double b, double fb) const {
        return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    }

    double adapt(double a, double fa, double m, double fm, double b, double fb, double whole,
                 double tol, int depth) const {
        double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        double flm = f(lm), frm = f(rm);
        double left = segment(a, fa, lm, flm, m, fm);
        double right = segment(m, fm, rm, frm, b, fb);
        double delta = left + right - whole;
        if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
            return left + right + delta / 15.0;
        return adapt(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
               adapt(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol) {
    if (a == b) return 0.0;
    if (abs_tol <= 0.0) throw std::invalid_argument("integrate: tolerance must be positive");
    Simpson s{f};
    double m = 0.5 * (a + b);
    double fa = f(a), fm = f(m), fb = f(b);
    double whole = s.segment(a, fa, m, fm, b, fb);
    return s.adapt(a, fa, m, fm, b, fb, whole, abs_tol, 48);
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
    if (lo > hi) std::swap(lo, hi);
    double flo = f(lo), fhi = f(hi);
    for (int tries = 0; flo * fhi > 0.0 && tries < 16; ++tries) {
        double width = std::max(hi - lo, 1e-6);
        if (tries % 2 == 0)
            hi += width, fhi = f(hi);
        else
            lo -= width, flo = f(lo);
    }
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw std::runtime_error("find_root: no sign change in bracket");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if (flo * fmid < 0.0)
            hi = mid;
        else {
            lo = mid;
            flo = fmid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace qa
