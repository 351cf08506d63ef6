#include "qauction/stream_protocol.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace qa {

void validate_feasible_set(const FeasibleSet& fs) {
    if (fs.B < 1) throw std::invalid_argument("feasible set needs B >= 1");
    if (fs.distributions.empty()) throw std::invalid_argument("feasible set is empty");
    for (const auto& p : fs.distributions) {
        if (static_cast<int>(p.size()) != 2 * fs.B)
            throw std::invalid_argument("distribution length is not 2B");
        Rat sum = 0;
        for (const Rat& v : p) {
            if (v < 0 || v > 1) throw std::invalid_argument("probability outside [0,1]");
            sum += v;
        }
        if (sum != 1) throw std::invalid_argument("distribution does not sum to 1");
    }
}

FeasibleSet load_feasible_set_json(const std::string& text) {
    nlohmann::ordered_json j = nlohmann::ordered_json::parse(text);
    FeasibleSet fs;
    fs.B = j.at("B").get<int>();
    for (const auto& row : j.at("distributions")) {
        std::vector<Rat> p;
        for (const auto& v : row) {
            if (v.is_string())
                p.push_back(parse_rational(v.get<std::string>()));
            else
                p.push_back(rat_from_double(v.get<double>()));
        }
        fs.distributions.push_back(std::move(p));
    }
    validate_feasible_set(fs);
    return fs;
}

std::string save_feasible_set_json(const FeasibleSet& fs) {
    nlohmann::ordered_json j;
    j["B"] = fs.B;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& p : fs.distributions) {
        auto row = nlohmann::ordered_json::array();
        for (const Rat& v : p) row.push_back(rational_string(v));
        rows.push_back(row);
    }
    j["distributions"] = rows;
    return j.dump(2) + "\n";
}

std::vector<int> suggested_bits(const std::vector<Rat>& p, int r) {
    std::vector<int> bits(p.size());
    for (size_t j = 0; j < p.size(); ++j) bits[j] = dyadic_digit(p[j], r);
    return bits;
}

StreamState start_stream(const FeasibleSet& fs) {
    validate_feasible_set(fs);
    StreamState st;
    st.surviving.resize(fs.distributions.size());
    std::iota(st.surviving.begin(), st.surviving.end(), 0);
    return st;
}

std::vector<int> consistency_correct(StreamState& state, const FeasibleSet& fs,
                                     const std::vector<int>& proposed) {
    if (state.surviving.empty()) throw std::logic_error("no surviving feasible distribution");
    if (proposed.size() != static_cast<size_t>(2 * fs.B))
        throw std::invalid_argument("expected 2B proposed bits");
    int r = state.round + 1;
    std::vector<int> corrected(proposed.size());
    for (size_t j = 0; j < proposed.size(); ++j) {
        int seen = -1;  // -1 none, 0/1 single value, 2 both
        for (int d : state.surviving) {
            int bit = dyadic_digit(fs.distributions[d][j], r);
            if (seen == -1)
                seen = bit;
            else if (seen != bit) {
                seen = 2;
                break;
            }
        }
        int bit = (seen == 2) ? proposed[j] : seen;
        corrected[j] = bit;
        if (seen == 2) {
            std::vector<int> next;
            for (int d : state.surviving)
                if (dyadic_digit(fs.distributions[d][j], r) == bit) next.push_back(d);
            state.surviving = std::move(next);
        }
    }
    return corrected;
}

StepResult step(StreamState& state, const std::vector<int>& bits, RngStream& rng) {
    int r = state.round + 1;
    Rat revealed = 0;
    Rat unit = Rat(1, BigInt(1) << r);
    for (int b : bits) {
        if (b != 0 && b != 1) throw std::invalid_argument("bits must be 0/1");
        if (b) revealed += unit;
    }
    Rat tau_next = state.tau + revealed;
    if (tau_next > 1) throw std::invalid_argument("revealed mass exceeds 1");

    state.bits.push_back(bits);
    state.round = r;
    Rat tau_prev = state.tau;
    state.tau = tau_next;

    StepResult res;
    if (revealed == 0) return res;
    Rat stop_prob = revealed / (1 - tau_prev);
    if (!bernoulli_exact(rng, stop_prob)) return res;

    // conditioned on stopping this round, outcomes weight equally per set bit
    std::vector<Rat> weights(bits.size());
    for (size_t j = 0; j < bits.size(); ++j) weights[j] = bits[j];
    res.terminated = true;
    res.outcome = categorical_exact(rng, weights) + 1;
    return res;
}

RunResult run_stream(const FeasibleSet& fs, int type_index, RngStream& rng, int depth_cap) {
    const auto& p = fs.distributions.at(type_index);
    StreamState st = start_stream(fs);
    RunResult out;
    for (int r = 1; r <= depth_cap; ++r) {
        std::vector<int> corrected = consistency_correct(st, fs, suggested_bits(p, r));
        out.bits_sent += static_cast<long long>(corrected.size());
        StepResult sr = step(st, corrected, rng);
        out.rounds = r;
        if (sr.terminated) {
            out.outcome = sr.outcome;
            return out;
        }
    }
    // depth cap reached (probability <= 2B * 2^-depth_cap): settle by the
    // conditional law on the mass not yet revealed, so the run's outcome
    // distribution is still exactly the surviving distribution's.
    const auto& q = fs.distributions[st.surviving.front()];
    std::vector<Rat> residual(q.size());
    for (size_t j = 0; j < q.size(); ++j) {
        Rat revealed = 0;
        for (int t = 1; t <= st.round; ++t)
            if (st.bits[t - 1][j]) revealed += Rat(1, BigInt(1) << t);
        residual[j] = q[j] - revealed;
        if (residual[j] < 0) throw std::logic_error("negative residual mass");
    }
    out.outcome = categorical_exact(rng, residual) + 1;
    return out;
}

double expected_rounds_bound(int B) {
    if (B < 2) throw std::invalid_argument("bound stated for B >= 2");
    double log_b = std::log2(static_cast<double>(B));
    // sum_{k>=1} 2B * B^(-2k) = 2B / (B^2 - 1)
    double tail = 2.0 * B / (static_cast<double>(B) * B - 1.0);
    return 2.0 * log_b + 4.0 * log_b * tail;
}

}  // namespace qa
