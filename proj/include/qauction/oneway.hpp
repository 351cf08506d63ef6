#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qauction/matrix.hpp"
#include "qauction/partition.hpp"

namespace qa {

// One-shot protocol: the buyer sends two classical bits plus one quantum
// message. Three of the bit pairs commit to a fixed (bundle, payment); the
// remaining pair hands the quantum message to a labeled POVM.

using BitPair = std::pair<int, int>;

struct BranchEntry {
    bool quantum = false;
    uint32_t bundle = 0;  // bit 0 = item 1, bit 1 = item 2
    double payment = 0.0;
};

struct QuantumEffect {
    CMat effect;
    uint32_t bundle = 0;
    double payment = 0.0;
};

struct OneWayProtocol {
    int dim = 2;
    std::map<BitPair, BranchEntry> branches;
    std::vector<QuantumEffect> effects;
};

// Per-bundle sums of the POVM effects plus the payment operator
// Q = sum_l p_l A_l. Indexing: a10 allocates item 1 only, a01 item 2 only.
struct AggregateMatrices {
    CMat a00, a10, a01, a11, q;
    double completeness_residual = 0.0;
};

// Throws when the quantum effects are present but not a valid POVM.
AggregateMatrices aggregate(const OneWayProtocol& p, const Tolerances& tol = Tolerances{});

struct QuantumUtility {
    double value = 0.0;
    PureState message;
};

// Best achievable utility of the quantum branch for type (x, y):
// the top eigenpair of x (A10 + A11) + y (A01 + A11) - Q.
QuantumUtility quantum_branch_utility(const AggregateMatrices& agg, double x, double y);
QuantumUtility quantum_branch_utility(const OneWayProtocol& p, double x, double y);

struct BranchChoice {
    double value = 0.0;
    BitPair bits{0, 0};
    bool quantum = false;
};

// Max over branches; fixed branches win ties in bit order.
BranchChoice protocol_utility(const OneWayProtocol& p, double x, double y);

// The concrete one-qubit protocol that is optimal for the uniform x monster
// pair of priors. Fixed branches: (0,0) -> nothing / 0, (0,1) -> item 2 at
// the constant strip price, (1,1) -> both items at the critical price;
// (1,0) is the quantum branch.
OneWayProtocol monster_protocol();

// Expected payment collected from a buyer playing the best branch
// (for the quantum branch, the Rayleigh quotient of Q at the optimal
// message), integrated against the priors.
double protocol_revenue(const OneWayProtocol& p, const Prior1D& f1, const Prior1D& f2);

// Max over an (n+1)-point grid of |protocol_utility(p, x, 1) - target(x)|.
// A grid sup is evidence, not a proof: zero mismatch on a grid does not
// certify that the protocol implements the target utility exactly.
double mismatch_sup(const OneWayProtocol& p, const std::function<double(double)>& target,
                    double x_lo, double x_hi, int n);

}  // namespace qa
