#include "qauction/mechanism.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "json.hpp"

namespace qa {

namespace {

constexpr double kSumTol = 1e-12;

}  // namespace

double Valuation::value(uint32_t bundle) const {
    switch (kind) {
        case Kind::table:
            return table.at(bundle);
        case Kind::additive: {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                if (bundle & (1u << i)) s += item_values[i];
            return s;
        }
        case Kind::unit_demand: {
            double best = 0.0;
            for (int i = 0; i < n; ++i)
                if (bundle & (1u << i)) best = std::max(best, item_values[i]);
            return best;
        }
    }
    throw std::logic_error("unreachable valuation kind");
}

Valuation table_valuation(int n, std::vector<double> table) {
    if (n < 0 || n > 16) throw std::invalid_argument("table valuations support n <= 16");
    if (table.size() != (size_t{1} << n)) throw std::invalid_argument("table needs 2^n entries");
    Valuation v;
    v.n = n;
    v.kind = Valuation::Kind::table;
    v.table = std::move(table);
    return v;
}

Valuation additive_valuation(std::vector<double> items) {
    Valuation v;
    v.n = static_cast<int>(items.size());
    v.kind = Valuation::Kind::additive;
    v.item_values = std::move(items);
    return v;
}

Valuation unit_demand_valuation(std::vector<double> items) {
    Valuation v;
    v.n = static_cast<int>(items.size());
    v.kind = Valuation::Kind::unit_demand;
    v.item_values = std::move(items);
    return v;
}

void validate_type_space(const FiniteTypeSpace& ts, double value_cap) {
    if (ts.types.size() != ts.prior.size())
        throw std::invalid_argument("type/prior length mismatch");
    double sum = 0.0;
    for (double w : ts.prior) {
        if (w < 0.0) throw std::invalid_argument("negative prior weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSumTol)
        throw std::invalid_argument("prior weights sum to " + std::to_string(sum));
    for (const Valuation& v : ts.types) {
        switch (v.kind) {
            case Valuation::Kind::table:
                for (double val : v.table)
                    if (val < 0.0 || val > value_cap)
                        throw std::invalid_argument("bundle value outside [0, cap]");
                break;
            case Valuation::Kind::additive: {
                // extremes suffice: non-negative items, full bundle below cap
                double total = 0.0;
                for (double val : v.item_values) {
                    if (val < 0.0) throw std::invalid_argument("negative item value");
                    total += val;
                }
                if (total > value_cap) throw std::invalid_argument("bundle value exceeds cap");
                break;
            }
            case Valuation::Kind::unit_demand:
                for (double val : v.item_values)
                    if (val < 0.0 || val > value_cap)
                        throw std::invalid_argument("item value outside [0, cap]");
                break;
        }
    }
}

void validate_mechanism(const Mechanism& m, double payment_cap) {
    for (const auto& lot : m.per_type) {
        double sum = 0.0;
        for (const Outcome& o : lot) {
            if (o.prob < 0.0) throw std::invalid_argument("negative outcome probability");
            if (o.payment > payment_cap + kSumTol)
                throw std::invalid_argument("payment exceeds cap");
            sum += o.prob;
        }
        if (std::abs(sum - 1.0) > kSumTol)
            throw std::invalid_argument("outcome probabilities sum to " + std::to_string(sum));
    }
}

Mechanism normalize_binary_payments(const Mechanism& m, double U) {
    if (U <= 0.0) throw std::invalid_argument("normalize_binary_payments: U must be positive");
    Mechanism out;
    out.n = m.n;
    out.per_type.reserve(m.per_type.size());
    for (size_t t = 0; t < m.per_type.size(); ++t) {
        double pay = expected_payment(m, static_cast<int>(t));
        if (pay < -kSumTol || pay > U + kSumTol)
            throw std::invalid_argument("expected payment outside [0, U] for type " +
                                        std::to_string(t));
        double charge = std::clamp(pay / U, 0.0, 1.0);
        // collapse to per-bundle marginals, bundle order by mask
        std::map<uint32_t, double> marginal;
        for (const Outcome& o : m.per_type[t]) marginal[o.bundle] += o.prob;
        std::vector<Outcome> lot;
        for (const auto& [bundle, p] : marginal) {
            if (p * (1.0 - charge) > 0.0) lot.push_back({bundle, 0.0, p * (1.0 - charge)});
            if (p * charge > 0.0) lot.push_back({bundle, U, p * charge});
        }
        if (lot.empty()) lot.push_back({0, 0.0, 1.0});
        out.per_type.push_back(std::move(lot));
    }
    return out;
}

double expected_payment(const Mechanism& m, int type_index) {
    double s = 0.0;
    for (const Outcome& o : m.per_type.at(type_index)) s += o.prob * o.payment;
    return s;
}

double expected_utility(const Mechanism& m, const FiniteTypeSpace& ts, int true_type,
                        int reported_type) {
    const Valuation& v = ts.types.at(true_type);
    double u = 0.0;
    for (const Outcome& o : m.per_type.at(reported_type)) u += o.prob * (v.value(o.bundle) - o.payment);
    return u;
}

IcReport check_ic(const Mechanism& m, const FiniteTypeSpace& ts, double eps) {
    IcReport rep;
    rep.worst_violation = 0.0;
    int k = static_cast<int>(ts.types.size());
    for (int v = 0; v < k; ++v) {
        double truthful = expected_utility(m, ts, v, v);
        for (int r = 0; r < k; ++r) {
            if (r == v) continue;
            double gain = expected_utility(m, ts, v, r) - truthful;
            if (gain > rep.worst_violation) {
                rep.worst_violation = gain;
                rep.worst_type = v;
                rep.worst_report = r;
            }
        }
    }
    rep.pass = rep.worst_violation <= eps + kSumTol;
    return rep;
}

IcReport check_ir(const Mechanism& m, const FiniteTypeSpace& ts, double eps) {
    IcReport rep;
    rep.worst_violation = 0.0;
    for (int v = 0; v < static_cast<int>(ts.types.size()); ++v) {
        double loss = -expected_utility(m, ts, v, v);
        if (loss > rep.worst_violation) {
            rep.worst_violation = loss;
            rep.worst_type = v;
            rep.worst_report = v;
        }
    }
    rep.pass = rep.worst_violation <= eps + kSumTol;
    return rep;
}

double expected_revenue(const Mechanism& m, const FiniteTypeSpace& ts) {
    double rev = 0.0;
    for (size_t t = 0; t < ts.types.size(); ++t)
        rev += ts.prior[t] * expected_payment(m, static_cast<int>(t));
    return rev;
}

Mechanism mechanism_from_menu(int n, const std::vector<std::vector<Outcome>>& menu,
                              const FiniteTypeSpace& ts) {
    if (menu.empty()) throw std::invalid_argument("empty menu");
    Mechanism out;
    out.n = n;
    for (const Valuation& v : ts.types) {
        int best = 0;
        double best_u = -1e300;
        for (size_t e = 0; e < menu.size(); ++e) {
            double u = 0.0;
            for (const Outcome& o : menu[e]) u += o.prob * (v.value(o.bundle) - o.payment);
            if (u > best_u + kSumTol) {  // strict improvement only: ties keep the lower index
                best_u = u;
                best = static_cast<int>(e);
            }
        }
        out.per_type.push_back(menu[best]);
    }
    return out;
}

namespace {

using Json = nlohmann::ordered_json;

uint32_t bundle_from_json(const Json& j, int n) {
    uint32_t mask = 0;
    for (const auto& item : j) {
        int i = item.get<int>();
        if (i < 0 || i >= n) throw std::invalid_argument("bundle item index out of range");
        mask |= (1u << i);
    }
    return mask;
}

Json bundle_to_json(uint32_t mask, int n) {
    Json arr = Json::array();
    for (int i = 0; i < n; ++i)
        if (mask & (1u << i)) arr.push_back(i);
    return arr;
}

}  // namespace

MechanismFile load_mechanism_json(const std::string& text) {
    Json j = Json::parse(text);
    MechanismFile mf;
    int n = j.at("n").get<int>();
    mf.mech.n = n;
    for (const auto& tj : j.at("types")) {
        if (tj.contains("table"))
            mf.space.types.push_back(table_valuation(n, tj.at("table").get<std::vector<double>>()));
        else {
            auto items = tj.at("items").get<std::vector<double>>();
            std::string comb = tj.at("combiner").get<std::string>();
            if (comb == "additive")
                mf.space.types.push_back(additive_valuation(std::move(items)));
            else if (comb == "unit-demand")
                mf.space.types.push_back(unit_demand_valuation(std::move(items)));
            else
                throw std::invalid_argument("unknown combiner: " + comb);
        }
    }
    mf.space.prior = j.at("prior").get<std::vector<double>>();
    mf.mech.per_type.resize(mf.space.types.size());
    for (const auto& [key, lot] : j.at("outcomes").items()) {
        size_t t = std::stoul(key);
        if (t >= mf.mech.per_type.size()) throw std::invalid_argument("outcome type index out of range");
        for (const auto& oj : lot) {
            Outcome o;
            o.bundle = bundle_from_json(oj.at("bundle"), n);
            o.payment = oj.at("payment").get<double>();
            o.prob = oj.at("prob").get<double>();
            mf.mech.per_type[t].push_back(o);
        }
    }
    return mf;
}

std::string save_mechanism_json(const MechanismFile& mf) {
    Json j;
    j["n"] = mf.mech.n;
    j["types"] = Json::array();
    for (const Valuation& v : mf.space.types) {
        Json tj;
        switch (v.kind) {
            case Valuation::Kind::table:
                tj["table"] = v.table;
                break;
            case Valuation::Kind::additive:
                tj["items"] = v.item_values;
                tj["combiner"] = "additive";
                break;
            case Valuation::Kind::unit_demand:
                tj["items"] = v.item_values;
                tj["combiner"] = "unit-demand";
                break;
        }
        j["types"].push_back(tj);
    }
    j["prior"] = mf.space.prior;
    Json outcomes = Json::object();
    for (size_t t = 0; t < mf.mech.per_type.size(); ++t) {
        Json lot = Json::array();
        for (const Outcome& o : mf.mech.per_type[t]) {
            Json oj;
            oj["bundle"] = bundle_to_json(o.bundle, mf.mech.n);
            oj["payment"] = o.payment;
            oj["prob"] = o.prob;
            lot.push_back(oj);
        }
        outcomes[std::to_string(t)] = lot;
    }
    j["outcomes"] = outcomes;
    return j.dump(2) + "\n";
}

}  // namespace qa
