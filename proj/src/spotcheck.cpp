#include "qauction/spotcheck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace qa {

namespace {

bool is_pow2(int b) { return b >= 1 && (b & (b - 1)) == 0; }

int log2_int(int b) {
    int k = 0;
    while ((1 << k) < b) ++k;
    return k;
}

int tau_consistent(const std::vector<Rat>& p_hat, int B) {
    Rat sum = 0;
    for (const Rat& v : p_hat) sum += v;
    Rat tau = Rat(static_cast<long long>(B) * B) * (1 - sum);
    if (rat_den(tau) != 1) throw std::logic_error("tau_hat not integral");
    return static_cast<int>(rat_num(tau).convert_to<long long>());
}

std::vector<int> prefix_survivors(const FeasibleSet& fs, const std::vector<Rat>& p_hat) {
    std::vector<int> out;
    for (size_t d = 0; d < fs.distributions.size(); ++d) {
        auto [q_hat, tau] = round_down(fs.distributions[d], fs.B);
        (void)tau;
        if (q_hat == p_hat) out.push_back(static_cast<int>(d));
    }
    return out;
}

// Runs the deterministic correction dynamics until every surviving
// distribution is the same vector; that vector is what the corrected stream
// reveals from the hand-off on.
std::vector<Rat> effective_continuation(const FeasibleSet& fs, std::vector<int> surviving,
                                        const std::vector<Rat>& downstream, int first_round) {
    auto all_equal = [&]() {
        const auto& head = fs.distributions[surviving.front()];
        for (int d : surviving)
            if (fs.distributions[d] != head) return false;
        return true;
    };
    int r = first_round;
    while (!all_equal()) {
        if (r > first_round + 1000000) throw std::logic_error("correction dynamics did not settle");
        for (size_t j = 0; j < downstream.size() && surviving.size() > 1; ++j) {
            int seen = -1;
            for (int d : surviving) {
                int bit = dyadic_digit(fs.distributions[d][j], r);
                if (seen == -1)
                    seen = bit;
                else if (seen != bit) {
                    seen = 2;
                    break;
                }
            }
            if (seen != 2) continue;
            int bit = dyadic_digit(downstream[j], r);
            std::vector<int> next;
            for (int d : surviving)
                if (dyadic_digit(fs.distributions[d][j], r) == bit) next.push_back(d);
            surviving = std::move(next);
        }
        ++r;
    }
    return fs.distributions[surviving.front()];
}

}  // namespace

SpotcheckConfig make_spotcheck_config(int B, double U, double eps, double delta) {
    if (!is_pow2(B)) throw std::invalid_argument("B must be a power of two (pad the menu first)");
    if (U <= 0.0 || eps <= 0.0) throw std::invalid_argument("U and eps must be positive");
    SpotcheckConfig cfg;
    cfg.B = B;
    cfg.U = U;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.penalty = 2.0 * B * U * U * U / (eps * eps);
    cfg.qubits = log2_int(B) + 1;
    return cfg;
}

Rat gamma_exact(int tau_hat, int B) {
    if (B < 1) throw std::invalid_argument("B must be positive");
    if (tau_hat < 0 || tau_hat > B) throw std::invalid_argument("tau_hat outside [0, B]");
    Rat half_b = Rat(1, 2 * static_cast<long long>(B));
    Rat frac = Rat(tau_hat, static_cast<long long>(B) * B);
    return 1 - half_b - (1 - half_b) * frac;
}

double gamma(int tau_hat, int B) { return to_double(gamma_exact(tau_hat, B)); }

std::pair<std::vector<Rat>, int> round_down(const std::vector<Rat>& p, int B) {
    long long b2 = static_cast<long long>(B) * B;
    std::vector<Rat> p_hat(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || p[i] > 1) throw std::invalid_argument("probability outside [0,1]");
        BigInt fl = (rat_num(p[i]) * b2) / rat_den(p[i]);
        p_hat[i] = Rat(fl, b2);
    }
    int tau = tau_consistent(p_hat, B);
    // The tail message is log2(B+1) bits wide, so only tau in [0, B] is
    // representable.  Flooring 2B entries can shave off up to (2B-1)/B^2 of
    // mass, so distributions whose fractional parts sum past B/B^2 fall
    // outside the protocol's alphabet and are rejected here.
    if (tau < 0 || tau > B) throw std::domain_error("rounded tail outside [0, B]");
    return {std::move(p_hat), tau};
}

PureState canonical_state(const std::vector<Rat>& p_hat, int tau_hat) {
    if (p_hat.empty() || p_hat.size() % 2 != 0)
        throw std::invalid_argument("p_hat must have 2B entries");
    int B = static_cast<int>(p_hat.size()) / 2;
    if (tau_hat != tau_consistent(p_hat, B))
        throw std::invalid_argument("tau_hat inconsistent with p_hat");
    double scale = B / std::sqrt(static_cast<double>(B) * B - tau_hat);
    PureState psi;
    psi.dim = 2 * B;
    psi.amp.resize(psi.dim);
    for (int i = 0; i < psi.dim; ++i) psi.amp[i] = scale * std::sqrt(to_double(p_hat[i]));
    return psi;
}

uint32_t OutcomeTable::bundle_of(int outcome) const {
    if (outcome < 1 || outcome > 2 * B) throw std::invalid_argument("outcome index out of range");
    return bundles.at((outcome - 1) / 2);
}

double OutcomeTable::payment_of(int outcome) const {
    if (outcome < 1 || outcome > 2 * B) throw std::invalid_argument("outcome index out of range");
    return ((outcome - 1) % 2 == 1) ? U : 0.0;
}

std::pair<FeasibleSet, OutcomeTable> feasible_set_from_mechanism(const Mechanism& m, double U) {
    // Exactness requirement: outcome probabilities enter as the exact dyadic
    // values of their doubles, so per-type sums must hit 1 exactly.
    std::set<uint32_t> seen;
    for (const auto& lot : m.per_type)
        for (const Outcome& o : lot) seen.insert(o.bundle);
    if (seen.empty()) throw std::invalid_argument("mechanism has no outcomes");
    std::vector<uint32_t> bundles(seen.begin(), seen.end());
    int B = 1;
    while (B < static_cast<int>(bundles.size())) B *= 2;
    bundles.resize(B, 0u);  // padding slots carry zero probability everywhere

    std::map<uint32_t, int> pos;
    for (size_t j = 0; j < seen.size(); ++j) pos[bundles[j]] = static_cast<int>(j);

    OutcomeTable table;
    table.B = B;
    table.U = U;
    table.bundles = bundles;

    FeasibleSet fs;
    fs.B = B;
    double tol = 1e-12 * std::max(1.0, U);
    for (const auto& lot : m.per_type) {
        std::vector<Rat> row(2 * B, Rat(0));
        for (const Outcome& o : lot) {
            int slot;
            if (std::abs(o.payment) <= tol)
                slot = 2 * pos.at(o.bundle);
            else if (std::abs(o.payment - U) <= tol)
                slot = 2 * pos.at(o.bundle) + 1;
            else
                throw std::invalid_argument("payment is neither 0 nor U; normalize first");
            row[slot] += rat_from_double(o.prob);
        }
        fs.distributions.push_back(std::move(row));
    }
    validate_feasible_set(fs);
    return {std::move(fs), std::move(table)};
}

void validate_strategy(const SpotBuyerStrategy& s, int B) {
    if (!is_pow2(B)) throw std::invalid_argument("B must be a power of two");
    long long b2 = static_cast<long long>(B) * B;
    if (s.p_hat.size() != static_cast<size_t>(2 * B))
        throw std::invalid_argument("p_hat must have 2B entries");
    Rat sum = 0;
    for (const Rat& v : s.p_hat) {
        if (v < 0 || v > 1) throw std::invalid_argument("p_hat entry outside [0,1]");
        if (rat_den(v * b2) != 1) throw std::invalid_argument("p_hat entry not a multiple of 1/B^2");
        sum += v;
    }
    if (sum > 1) throw std::invalid_argument("p_hat mass exceeds 1");
    if (s.tau_hat < 0 || s.tau_hat > B) throw std::invalid_argument("tau_hat outside [0, B]");
    if (s.downstream.size() != static_cast<size_t>(2 * B))
        throw std::invalid_argument("downstream distribution must have 2B entries");
    for (const Rat& v : s.downstream)
        if (v < 0 || v > 1) throw std::invalid_argument("downstream entry outside [0,1]");
    if (s.basis_index < 0 || s.basis_index >= 2 * B)
        throw std::invalid_argument("basis index out of range");
    if (s.mix_weight < 0 || s.mix_weight > 1)
        throw std::invalid_argument("mix weight outside [0,1]");
    if (s.rho.mat.dim != 2 * B) throw std::invalid_argument("rho dimension is not 2B");
}

SpotBuyerStrategy suggested_strategy(const FeasibleSet& fs, int type_index) {
    const auto& p = fs.distributions.at(type_index);
    SpotBuyerStrategy s;
    s.quantum = SpotBuyerStrategy::Quantum::canonical;
    auto [p_hat, tau] = round_down(p, fs.B);
    s.p_hat = std::move(p_hat);
    s.tau_hat = tau;
    s.downstream = p;
    s.rho = pure_density(canonical_state(s.p_hat, s.tau_hat));
    return s;
}

std::vector<Rat> quantum_diagonal(const SpotBuyerStrategy& s, int B) {
    long long b2 = static_cast<long long>(B) * B;
    int tau_star = tau_consistent(s.p_hat, B);
    std::vector<Rat> diag(2 * B, Rat(0));
    Rat scale = Rat(b2, b2 - tau_star);
    switch (s.quantum) {
        case SpotBuyerStrategy::Quantum::canonical:
            for (int i = 0; i < 2 * B; ++i) diag[i] = s.p_hat[i] * scale;
            return diag;
        case SpotBuyerStrategy::Quantum::basis:
            diag[s.basis_index] = 1;
            return diag;
        case SpotBuyerStrategy::Quantum::mix_canonical_basis:
            for (int i = 0; i < 2 * B; ++i) diag[i] = s.mix_weight * s.p_hat[i] * scale;
            diag[s.basis_index] += 1 - s.mix_weight;
            return diag;
        case SpotBuyerStrategy::Quantum::custom: {
            Rat total = 0;
            for (int i = 0; i < 2 * B; ++i) {
                double v = std::max(0.0, s.rho.mat.at(i, i).real());
                diag[i] = rat_from_double(v);
                total += diag[i];
            }
            if (total == 0) throw std::invalid_argument("rho diagonal vanishes");
            for (auto& v : diag) v /= total;
            return diag;
        }
    }
    throw std::logic_error("unreachable quantum kind");
}

Rat exact_fidelity(const SpotBuyerStrategy& s, int B) {
    long long b2 = static_cast<long long>(B) * B;
    int tau_star = tau_consistent(s.p_hat, B);
    Rat basis_overlap = s.p_hat[s.basis_index] * Rat(b2, b2 - tau_star);
    switch (s.quantum) {
        case SpotBuyerStrategy::Quantum::canonical:
            return 1;
        case SpotBuyerStrategy::Quantum::basis:
            return basis_overlap;
        case SpotBuyerStrategy::Quantum::mix_canonical_basis:
            return s.mix_weight + (1 - s.mix_weight) * basis_overlap;
        case SpotBuyerStrategy::Quantum::custom: {
            PureState psi = canonical_state(s.p_hat, tau_star);
            double f = trace_product(psi.outer(), s.rho.mat).real();
            return rat_from_double(std::clamp(f, 0.0, 1.0));
        }
    }
    throw std::logic_error("unreachable quantum kind");
}

SpotLaw outcome_distribution_exact(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                                   const SpotBuyerStrategy& s) {
    validate_feasible_set(fs);
    if (cfg.B != fs.B) throw std::invalid_argument("config and feasible set disagree on B");
    validate_strategy(s, fs.B);
    int B = fs.B;
    long long b2 = static_cast<long long>(B) * B;
    int tau_star = tau_consistent(s.p_hat, B);
    bool mismatch = (s.tau_hat != tau_star);

    Rat g = gamma_exact(s.tau_hat, B);
    SpotLaw law;
    law.outcome.assign(2 * B, Rat(0));

    std::vector<Rat> diag = quantum_diagonal(s, B);
    for (int i = 0; i < 2 * B; ++i) law.outcome[i] += g * diag[i];

    Rat spot = 1 - g;
    if (mismatch) {
        law.penalized += spot;
        return law;
    }

    Rat f = exact_fidelity(s, B);
    law.penalized += spot * (1 - f);
    Rat pass = spot * f;

    // conditioned on passing: outcome i with weight p_hat_i / (2B(1-gamma))
    Rat denom = 2 * B * spot;
    Rat direct_total = 0;
    for (int i = 0; i < 2 * B; ++i) {
        Rat w = s.p_hat[i] / denom;
        law.outcome[i] += pass * w;
        direct_total += w;
    }
    Rat cont = pass * (1 - direct_total);
    if (cont == 0) return law;

    std::vector<int> surviving = prefix_survivors(fs, s.p_hat);
    if (surviving.empty()) {
        // no feasible distribution extends this reply; the hand-off treats it
        // like a failed check
        law.penalized += cont;
        return law;
    }
    std::vector<Rat> q = effective_continuation(fs, surviving, s.downstream, 2 * log2_int(B) + 1);
    Rat remaining = Rat(tau_star, b2);  // 1 - sum p_hat
    for (int i = 0; i < 2 * B; ++i) law.outcome[i] += cont * (q[i] - s.p_hat[i]) / remaining;
    return law;
}

SpotRunResult run_spotcheck(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                            const OutcomeTable& table, const SpotBuyerStrategy& s, RngStream& rng,
                            double comm_bound, double truncation_payment, int depth_cap) {
    validate_feasible_set(fs);
    validate_strategy(s, fs.B);
    int B = fs.B;
    int k = log2_int(B);
    int tau_bits = static_cast<int>(std::ceil(std::log2(B + 1.0)));

    SpotRunResult res;
    res.qubits_sent = cfg.qubits;
    res.classical_bits_sent = tau_bits;
    auto total = [&]() { return static_cast<double>(res.qubits_sent + res.classical_bits_sent); };
    auto truncate = [&]() {
        res.truncated = true;
        res.outcome = 0;
        res.bundle = 0;
        res.payment = truncation_payment;
        return res;
    };
    if (total() > comm_bound) return truncate();

    auto settle = [&](int outcome) {
        res.outcome = outcome;
        res.bundle = table.bundle_of(outcome);
        res.payment = table.payment_of(outcome);
        return res;
    };
    auto penalize = [&]() {
        res.penalized = true;
        res.outcome = 0;
        res.bundle = 0;
        res.payment = cfg.penalty;
        return res;
    };

    Rat g = gamma_exact(s.tau_hat, B);
    if (bernoulli_exact(rng, g)) {
        // measurement branch: computational-basis sample of the message
        return settle(categorical_exact(rng, quantum_diagonal(s, B)) + 1);
    }

    // spot-check: the seller requests the full rounded distribution
    res.classical_bits_sent += 4LL * B * k;
    if (total() > comm_bound) return truncate();

    int tau_star = tau_consistent(s.p_hat, B);
    if (s.tau_hat != tau_star) return penalize();
    if (!bernoulli_exact(rng, exact_fidelity(s, B))) return penalize();

    Rat denom = 2 * B * (1 - g);
    std::vector<Rat> weights(2 * B + 1);
    Rat direct_total = 0;
    for (int i = 0; i < 2 * B; ++i) {
        weights[i] = s.p_hat[i] / denom;
        direct_total += weights[i];
    }
    weights[2 * B] = 1 - direct_total;
    int draw = categorical_exact(rng, weights);
    if (draw < 2 * B) return settle(draw + 1);

    // classical continuation from round 2 log2(B) + 1 with p_hat as prefix
    std::vector<int> surviving = prefix_survivors(fs, s.p_hat);
    if (surviving.empty()) return penalize();

    StreamState st;
    st.round = 2 * k;
    Rat covered = 0;
    for (const Rat& v : s.p_hat) covered += v;
    st.tau = covered;
    for (int t = 1; t <= 2 * k; ++t) {
        std::vector<int> row(2 * B);
        for (int j = 0; j < 2 * B; ++j) row[j] = dyadic_digit(s.p_hat[j], t);
        st.bits.push_back(std::move(row));
    }
    st.surviving = surviving;

    while (res.rounds < depth_cap) {
        int r = st.round + 1;
        std::vector<int> proposed(2 * B);
        for (int j = 0; j < 2 * B; ++j) proposed[j] = dyadic_digit(s.downstream[j], r);
        std::vector<int> corrected = consistency_correct(st, fs, proposed);
        res.classical_bits_sent += 2 * B;
        ++res.rounds;
        if (total() > comm_bound) return truncate();
        StepResult sr = step(st, corrected, rng);
        if (sr.terminated) return settle(sr.outcome);
    }

    // depth cap: resolve by the conditional law on the unrevealed mass
    const auto& q = fs.distributions[st.surviving.front()];
    std::vector<Rat> residual(q.size());
    for (size_t j = 0; j < q.size(); ++j) {
        Rat revealed = 0;
        for (int t = 1; t <= st.round; ++t)
            if (st.bits[t - 1][j]) revealed += Rat(1, BigInt(1) << t);
        residual[j] = q[j] - revealed;
    }
    return settle(categorical_exact(rng, residual) + 1);
}

double truncation_bound(double khat, double max_payment, double eps) {
    if (eps <= 0.0) throw std::invalid_argument("eps must be positive");
    return 4.0 * khat * max_payment / eps;
}

Rat exact_utility(const SpotcheckConfig& cfg, const OutcomeTable& table, const Valuation& v,
                  const SpotLaw& law) {
    Rat u = 0;
    for (size_t i = 0; i < law.outcome.size(); ++i) {
        int outcome = static_cast<int>(i) + 1;
        Rat gain = rat_from_double(v.value(table.bundle_of(outcome))) -
                   rat_from_double(table.payment_of(outcome));
        u += law.outcome[i] * gain;
    }
    u -= law.penalized * rat_from_double(cfg.penalty);
    return u;
}

DeviationReport deviation_sweep(const SpotcheckConfig& cfg, const FeasibleSet& fs,
                                const OutcomeTable& table, const Valuation& v,
                                const std::vector<std::pair<std::string, SpotBuyerStrategy>>& family) {
    DeviationReport rep;
    rep.max_utility = -std::numeric_limits<double>::infinity();
    for (const auto& [label, strat] : family) {
        SpotLaw law = outcome_distribution_exact(cfg, fs, strat);
        double u = to_double(exact_utility(cfg, table, v, law));
        rep.entries.push_back({label, u});
        if (u > rep.max_utility) {
            rep.max_utility = u;
            rep.argmax = label;
        }
    }
    return rep;
}

std::vector<std::pair<std::string, SpotBuyerStrategy>> standard_deviation_family(
    const FeasibleSet& fs, int type_index) {
    std::vector<std::pair<std::string, SpotBuyerStrategy>> family;
    int B = fs.B;
    SpotBuyerStrategy honest = suggested_strategy(fs, type_index);
    family.emplace_back("suggested", honest);

    for (int b = 0; b < 2 * B; ++b) {
        SpotBuyerStrategy s = honest;
        s.quantum = SpotBuyerStrategy::Quantum::basis;
        s.basis_index = b;
        s.rho = pure_density(basis_state(2 * B, b));
        family.emplace_back("basis-" + std::to_string(b + 1), s);
    }

    for (size_t k = 0; k < fs.distributions.size(); ++k) {
        if (static_cast<int>(k) == type_index) continue;
        family.emplace_back("report-type-" + std::to_string(k),
                            suggested_strategy(fs, static_cast<int>(k)));
    }

    int b_star = 0;
    for (int b = 0; b < 2 * B; ++b)
        if (honest.p_hat[b] > honest.p_hat[b_star]) b_star = b;
    for (Rat t : {Rat(1, 4), Rat(1, 2), Rat(3, 4)}) {
        SpotBuyerStrategy s = honest;
        s.quantum = SpotBuyerStrategy::Quantum::mix_canonical_basis;
        s.basis_index = b_star;
        s.mix_weight = t;
        CMat m = to_double(t) * honest.rho.mat +
                 to_double(1 - t) * basis_state(2 * B, b_star).outer();
        s.rho = make_density(std::move(m));
        family.emplace_back("mix-" + rational_string(t), s);
    }

    {
        SpotBuyerStrategy s = honest;
        s.tau_hat = (honest.tau_hat < B) ? honest.tau_hat + 1 : honest.tau_hat - 1;
        family.emplace_back("tau-shift", s);
    }

    for (size_t k = 0; k < fs.distributions.size(); ++k) {
        if (static_cast<int>(k) == type_index) continue;
        SpotBuyerStrategy s = honest;
        s.downstream = fs.distributions[k];
        family.emplace_back("downstream-type-" + std::to_string(k), s);
        break;
    }
    return family;
}

}  // namespace qa
