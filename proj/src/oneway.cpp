#include "qauction/oneway.hpp"

#include <cmath>
#include <stdexcept>

#include "qauction/monster.hpp"
#include "qauction/quadrature.hpp"

namespace qa {

AggregateMatrices aggregate(const OneWayProtocol& p, const Tolerances& tol) {
    AggregateMatrices agg;
    agg.a00 = CMat::zero(p.dim);
    agg.a10 = CMat::zero(p.dim);
    agg.a01 = CMat::zero(p.dim);
    agg.a11 = CMat::zero(p.dim);
    agg.q = CMat::zero(p.dim);
    if (p.effects.empty()) return agg;

    Povm povm;
    for (const auto& e : p.effects) {
        if (e.effect.dim != p.dim) throw std::invalid_argument("effect dimension mismatch");
        if (!std::isfinite(e.payment)) throw std::invalid_argument("payment must be finite");
        povm.elements.push_back(e.effect);
    }
    PovmReport rep = validate_povm(povm);
    agg.completeness_residual = rep.completeness_residual;
    if (!rep.valid(tol)) throw std::invalid_argument("quantum branch effects are not a POVM");

    for (const auto& e : p.effects) {
        CMat* slot = nullptr;
        switch (e.bundle & 3u) {
            case 0: slot = &agg.a00; break;
            case 1: slot = &agg.a10; break;
            case 2: slot = &agg.a01; break;
            default: slot = &agg.a11; break;
        }
        *slot = *slot + e.effect;
        agg.q = agg.q + e.payment * e.effect;
    }
    return agg;
}

QuantumUtility quantum_branch_utility(const AggregateMatrices& agg, double x, double y) {
    CMat v = x * (agg.a10 + agg.a11) + y * (agg.a01 + agg.a11) - agg.q;
    EigPair top = eig_max(v);
    return {top.value, top.vector};
}

QuantumUtility quantum_branch_utility(const OneWayProtocol& p, double x, double y) {
    if (p.effects.empty()) throw std::invalid_argument("protocol has no quantum branch");
    return quantum_branch_utility(aggregate(p), x, y);
}

namespace {

double bundle_value(uint32_t bundle, double x, double y) {
    return (bundle & 1u ? x : 0.0) + (bundle & 2u ? y : 0.0);
}

}  // namespace

BranchChoice protocol_utility(const OneWayProtocol& p, double x, double y) {
    BranchChoice best;
    bool have = false;
    for (const auto& [bits, entry] : p.branches) {
        if (entry.quantum) continue;
        double u = bundle_value(entry.bundle, x, y) - entry.payment;
        if (!have || u > best.value) {
            best = {u, bits, false};
            have = true;
        }
    }
    for (const auto& [bits, entry] : p.branches) {
        if (!entry.quantum) continue;
        double u = quantum_branch_utility(p, x, y).value;
        if (!have || u > best.value) {
            best = {u, bits, true};
            have = true;
        }
    }
    if (!have) throw std::invalid_argument("protocol has no branches");
    return best;
}

OneWayProtocol monster_protocol() {
    const CanonicalPartition& cp = monster_partition();
    double r21 = std::sqrt(21.0) / 16.0;

    OneWayProtocol p;
    p.dim = 2;
    p.branches[{0, 0}] = {false, 0u, 0.0};
    p.branches[{0, 1}] = {false, 2u, cp.s2(0.0)};
    p.branches[{1, 0}] = {true, 0u, 0.0};
    p.branches[{1, 1}] = {false, 3u, cp.p_crit};

    p.effects.push_back({CMat::from_real(2, {2.0 / 5.0, r21, r21, 1.0 / 4.0}), 3u, 2.0});
    p.effects.push_back({CMat::from_real(2, {2.0 / 5.0, -r21, -r21, 1.0 / 4.0}), 3u, 0.0});
    p.effects.push_back({CMat::from_real(2, {1.0 / 5.0, 0.0, 0.0, 0.0}), 3u, 299.0 / 24.0});
    p.effects.push_back({CMat::from_real(2, {0.0, 0.0, 0.0, 1.0 / 2.0}), 1u, 7.0 / 12.0});
    return p;
}

double protocol_revenue(const OneWayProtocol& p, const Prior1D& f1, const Prior1D& f2) {
    AggregateMatrices agg = aggregate(p);
    // same branch selection as protocol_utility, reusing one aggregate pass
    auto paid = [&](double x, double y) {
        double best = 0.0, pay = 0.0;
        bool have = false;
        for (const auto& [bits, entry] : p.branches) {
            if (entry.quantum) continue;
            double u = bundle_value(entry.bundle, x, y) - entry.payment;
            if (!have || u > best) {
                best = u;
                pay = entry.payment;
                have = true;
            }
        }
        for (const auto& [bits, entry] : p.branches) {
            if (!entry.quantum) continue;
            QuantumUtility qu = quantum_branch_utility(agg, x, y);
            if (!have || qu.value > best) {
                best = qu.value;
                pay = trace_product(qu.message.outer(), agg.q).real();
                have = true;
            }
        }
        return pay;
    };
    auto inner = [&](double y) {
        return integrate([&](double x) { return paid(x, y) * f1.pdf(x); }, 0.0, 1.0, 2e-9) *
               f2.pdf(y);
    };
    return integrate(inner, 0.0, 1.0, 1e-7);
}

double mismatch_sup(const OneWayProtocol& p, const std::function<double(double)>& target,
                    double x_lo, double x_hi, int n) {
    if (n < 1) throw std::invalid_argument("grid must have at least two points");
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = x_lo + (x_hi - x_lo) * i / n;
        worst = std::max(worst, std::abs(protocol_utility(p, x, 1.0).value - target(x)));
    }
    return worst;
}

}  // namespace qa
