#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qauction/matrix.hpp"
#include "qauction/mechanism.hpp"
#include "qauction/rational.hpp"
#include "qauction/stream_protocol.hpp"

namespace qa {

// Quantum-message auction: the buyer amplitude-encodes its outcome
// distribution. With probability gamma(tau_hat) the seller measures it and
// plays the measured outcome; otherwise a classical spot-check verifies the
// state against its claimed distribution, punishes detectable lies, and the
// run continues as the bit-streaming protocol from round 2*log2(B) + 1.

struct SpotcheckConfig {
    int B = 0;
    double U = 0.0;
    double eps = 0.0;
    double delta = 0.0;
    double penalty = 0.0;  // 2 B U^3 / eps^2
    int qubits = 0;        // ceil(log2 B) + 1
};

SpotcheckConfig make_spotcheck_config(int B, double U, double eps, double delta = 0.0);

// gamma(tau_hat) = 1 - 1/(2B) - (1 - 1/(2B)) tau_hat / B^2
Rat gamma_exact(int tau_hat, int B);
double gamma(int tau_hat, int B);

// p_hat_i = floor(p_i B^2) / B^2 and tau_hat = B^2 (1 - sum p_hat).  Flooring
// 2B entries can lose up to (2B-1)/B^2 of mass, but the tail message only
// encodes integers in [0, B]; throws std::domain_error past that.
std::pair<std::vector<Rat>, int> round_down(const std::vector<Rat>& p, int B);

// Unit vector with amplitude (B / sqrt(B^2 - tau_hat)) sqrt(p_hat_i) on |i>.
// Rejects tau_hat != B^2 (1 - sum p_hat).
PureState canonical_state(const std::vector<Rat>& p_hat, int tau_hat);

// How the seller maps stream outcomes back to menu outcomes: 1-based outcome
// 2j-1 is (bundle_j, 0) and 2j is (bundle_j, U).
struct OutcomeTable {
    int B = 0;
    double U = 0.0;
    std::vector<uint32_t> bundles;  // size B, sorted; padding entries are empty bundles

    uint32_t bundle_of(int outcome) const;  // outcome is 1-based
    double payment_of(int outcome) const;
};

// Aligns a binary-payment mechanism onto a shared 2B-outcome grid with exact
// rational probabilities; B is padded up to a power of two. Payments must
// already be 0 or U.
std::pair<FeasibleSet, OutcomeTable> feasible_set_from_mechanism(const Mechanism& m, double U);

struct SpotBuyerStrategy {
    // The quantum message is kept symbolically so fidelity and basis-measure
    // probabilities stay exact rationals; `rho` is the same state
    // materialized for trace-distance checks and POVM cross-checks.
    enum class Quantum { canonical, basis, mix_canonical_basis, custom };

    Quantum quantum = Quantum::canonical;
    int basis_index = 0;  // 0-based, for basis / mix kinds
    Rat mix_weight = 1;   // weight on the canonical component of a mix
    DensityMatrix rho;

    int tau_hat = 0;
    std::vector<Rat> p_hat;       // 2B entries, multiples of 1/B^2
    std::vector<Rat> downstream;  // distribution streamed after the hand-off
};

void validate_strategy(const SpotBuyerStrategy& s, int B);

SpotBuyerStrategy suggested_strategy(const FeasibleSet& fs, int type_index);

// Exact diagonal of the quantum message (basis-measurement law).
std::vector<Rat> quantum_diagonal(const SpotBuyerStrategy& s, int B);
// Exact fidelity <psi|rho|psi> against the canonical state of (p_hat, tau_hat).
Rat exact_fidelity(const SpotBuyerStrategy& s, int B);

struct SpotLaw {
    std::vector<Rat> outcome;  // 2B entries
    Rat penalized = 0;
};

// Closed-form outcome law of one run: measurement branch, spot-check branch
// with penalty mass, and the corrected-stream continuation. No sampling.
SpotLaw outcome_distribution_exact(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                                   const SpotBuyerStrategy& s);

struct SpotRunResult {
    int outcome = 0;  // 1-based, 0 when penalized or truncated
    uint32_t bundle = 0;
    double payment = 0.0;
    bool penalized = false;
    bool truncated = false;
    long long qubits_sent = 0;
    long long classical_bits_sent = 0;
    int rounds = 0;  // classical continuation rounds used
};

// Sampled seller flow; follows outcome_distribution_exact's law draw for
// draw. comm_bound caps total communication (qubits + bits); crossing it
// ends the run with an empty allocation and payment `truncation_payment`.
SpotRunResult run_spotcheck(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                            const OutcomeTable& table, const SpotBuyerStrategy& s, RngStream& rng,
                            double comm_bound = std::numeric_limits<double>::infinity(),
                            double truncation_payment = 0.0, int depth_cap = 64);

// Communication cap from the tail argument: a run is cut once its cost
// would exceed 4 khat P / eps, shifting expected payment by at most eps/4.
double truncation_bound(double khat, double max_payment, double eps);

// Expected buyer utility of a strategy under the exact law.
Rat exact_utility(const SpotcheckConfig& cfg, const OutcomeTable& table, const Valuation& v,
                  const SpotLaw& law);

struct DeviationEntry {
    std::string label;
    double utility = 0.0;
};

struct DeviationReport {
    std::vector<DeviationEntry> entries;
    double max_utility = 0.0;
    std::string argmax;
};

DeviationReport deviation_sweep(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                                const OutcomeTable& table, const Valuation& v,
                                const std::vector<std::pair<std::string, SpotBuyerStrategy>>& family);

// The documented adversarial family: basis states, canonical states of other
// feasible distributions, canonical/basis mixtures, a shifted tau_hat, and
// dishonest continuation digits.
std::vector<std::pair<std::string, SpotBuyerStrategy>> standard_deviation_family(
    const FeasibleSet& fs, int type_index);

}  // namespace qa
