#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace qa {

// Buyer valuation over bundles of n items. Either a full 2^n table or
// per-item values with a combiner. Bundles are bitmasks over items 0..n-1.
struct Valuation {
    enum class Kind { table, additive, unit_demand };

    int n = 0;
    Kind kind = Kind::table;
    std::vector<double> table;       // 2^n entries when kind == table
    std::vector<double> item_values; // n entries otherwise

    double value(uint32_t bundle) const;
};

Valuation table_valuation(int n, std::vector<double> table);
Valuation additive_valuation(std::vector<double> items);
Valuation unit_demand_valuation(std::vector<double> items);

struct FiniteTypeSpace {
    std::vector<Valuation> types;
    std::vector<double> prior;
};

// Throws std::invalid_argument on a bad prior or on values outside [0, value_cap].
void validate_type_space(const FiniteTypeSpace& ts, double value_cap);

struct Outcome {
    uint32_t bundle = 0;
    double payment = 0.0;
    double prob = 0.0;
};

// Direct mechanism over a finite type space: one lottery over
// (bundle, payment) outcomes per type, in type order.
struct Mechanism {
    int n = 0;
    std::vector<std::vector<Outcome>> per_type;
};

void validate_mechanism(const Mechanism& m, double payment_cap);

// Rewrites every payment to 0 or U, keeping per-bundle allocation
// probabilities and per-type expected payment unchanged: with bundle
// probability p_j and expected payment P, bundle j splits into
// (bundle, U) with probability p_j * P/U and (bundle, 0) with the rest.
// Rejects types whose expected payment lies outside [0, U].
Mechanism normalize_binary_payments(const Mechanism& m, double U);

struct IcReport {
    double worst_violation = 0.0;
    int worst_type = -1;    // truthful type with the largest gain from lying
    int worst_report = -1;  // the report achieving it
    bool pass = false;
};

// Worst gain from misreporting: max over (v, v') of u(v reports v') - u(v).
IcReport check_ic(const Mechanism& m, const FiniteTypeSpace& ts, double eps);
// Worst participation loss: max over v of -u(v).
IcReport check_ir(const Mechanism& m, const FiniteTypeSpace& ts, double eps);

double expected_payment(const Mechanism& m, int type_index);
double expected_utility(const Mechanism& m, const FiniteTypeSpace& ts, int true_type,
                        int reported_type);
double expected_revenue(const Mechanism& m, const FiniteTypeSpace& ts);

// Assigns each type its utility-maximizing menu entry; ties break toward the
// lower menu index, so the construction is deterministic (and IC by
// construction, which the tests lean on).
Mechanism mechanism_from_menu(int n, const std::vector<std::vector<Outcome>>& menu,
                              const FiniteTypeSpace& ts);

struct MechanismFile {
    FiniteTypeSpace space;
    Mechanism mech;
};

// JSON schema: {n, types: [...], prior: [...], outcomes: {"k": [{bundle, payment, prob}]}}
// where bundle is an array of 0-based item indices and each types[i] is either
// {"table": [...]} or {"items": [...], "combiner": "additive"|"unit-demand"}.
MechanismFile load_mechanism_json(const std::string& text);
std::string save_mechanism_json(const MechanismFile& mf);

}  // namespace qa
