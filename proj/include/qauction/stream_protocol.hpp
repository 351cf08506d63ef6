#pragma once

#include <string>
#include <vector>

#include "qauction/rational.hpp"
#include "qauction/rng.hpp"

namespace qa {

// Bit-by-bit auction protocol: the buyer streams the binary digits of a
// 2B-outcome distribution, the seller overwrites infeasible bits and stops
// early with probability equal to the newly revealed mass. All branching
// probabilities are exact rationals so the induced outcome law can be
// checked with zero tolerance.

struct FeasibleSet {
    int B = 0;  // the menu has B bundles, hence 2B (bundle, payment) outcomes
    std::vector<std::vector<Rat>> distributions;  // per type, 2B entries summing to 1
};

// Throws on an empty set, wrong row lengths, or rows not summing to 1.
void validate_feasible_set(const FeasibleSet& fs);

FeasibleSet load_feasible_set_json(const std::string& text);
std::string save_feasible_set_json(const FeasibleSet& fs);

// r-th binary digit (r >= 1) of each probability in p.
std::vector<int> suggested_bits(const std::vector<Rat>& p, int r);

struct StreamState {
    int round = 0;                       // rounds completed
    Rat tau = 0;                         // mass revealed so far, exact dyadic
    std::vector<std::vector<int>> bits;  // corrected bits, one row per round
    std::vector<int> surviving;          // feasible distributions matching the prefix
};

StreamState start_stream(const FeasibleSet& fs);

// Corrects the proposed bits for round state.round + 1, one bit at a time:
// a bit all surviving distributions agree on is forced; otherwise the
// proposed bit is kept and the surviving set is filtered to match it.
// Narrows state.surviving but does not advance the round.
std::vector<int> consistency_correct(StreamState& state, const FeasibleSet& fs,
                                     const std::vector<int>& proposed);

struct StepResult {
    bool terminated = false;
    int outcome = 0;  // 1-based outcome index in [1, 2B] when terminated
};

// Records the corrected bits for the next round and draws termination with
// probability (tau_r - tau_{r-1}) / (1 - tau_{r-1}); conditioned on stopping
// the outcome is uniform over the bits set this round.
StepResult step(StreamState& state, const std::vector<int>& bits, RngStream& rng);

struct RunResult {
    int outcome = 0;  // 1-based, in [1, 2B]
    int rounds = 0;
    long long bits_sent = 0;
};

// Full protocol loop for one buyer type. The buyer suggests its honest bits;
// rounds past depth_cap resolve by the conditional law on the unrevealed
// mass (a 2B * 2^-depth_cap tail event), so the outcome law stays exact.
RunResult run_stream(const FeasibleSet& fs, int type_index, RngStream& rng, int depth_cap = 64);

// Mean-round ceiling used by the simulation gates:
// 2 log2 B + 4 log2 B * sum_{k>=1} 2B * B^(-2k).
double expected_rounds_bound(int B);

}  // namespace qa
