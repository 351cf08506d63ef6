#include "qauction/report.hpp"

#include <ctime>
#include <fstream>
#include <stdexcept>

namespace qa {

Report::Report(const std::string& subcommand) : subcommand_(subcommand) {}

void Report::config(const std::string& key, const ojson& value) { config_[key] = value; }

void Report::tolerances(const Tolerances& tol) {
    ojson t;
    t["profile"] = tol.profile;
    t["hermiticity"] = tol.hermiticity;
    t["psd"] = tol.psd;
    t["trace_one"] = tol.trace_one;
    t["eig_residual"] = tol.eig_residual;
    t["prob_sum"] = tol.prob_sum;
    t["gk_residual"] = tol.gk_residual;
    t["quadrature_abs"] = tol.quadrature_abs;
    t["root_bisect"] = tol.root_bisect;
    t["lambert_residual"] = tol.lambert_residual;
    t["derivative_step"] = tol.derivative_step;
    config_["tolerances"] = t;
}

void Report::check(const std::string& name, double value, double bound) {
    bool ok = value <= bound;
    checks_.push_back({{"name", name}, {"value", value}, {"bound", bound}, {"pass", ok}});
    overall_ = overall_ && ok;
}

void Report::check_at_least(const std::string& name, double value, double bound) {
    bool ok = value >= bound;
    checks_.push_back(
        {{"name", name}, {"value", value}, {"min_bound", bound}, {"pass", ok}});
    overall_ = overall_ && ok;
}

void Report::check_flag(const std::string& name, bool pass) {
    checks_.push_back({{"name", name}, {"pass", pass}});
    overall_ = overall_ && pass;
}

void Report::stat(const std::string& name, const ojson& value) { stats_[name] = value; }

std::string Report::render(bool with_timestamp) const {
    ojson doc;
    doc["subcommand"] = subcommand_;
    doc["config"] = config_;
    doc["checks"] = checks_;
    if (!stats_.is_null()) doc["stats"] = stats_;
    doc["overall_pass"] = overall_;
    if (with_timestamp) {
        char buf[32];
        std::time_t now = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&now, &tm);
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        doc["timestamp"] = buf;
    }
    return doc.dump(2) + "\n";
}

void Report::write(const std::string& path, bool with_timestamp) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open report file: " + path);
    out << render(with_timestamp);
}

ojson matrix_to_json(const CMat& m) {
    ojson entries = ojson::array();
    for (const cplx& v : m.a) entries.push_back({v.real(), v.imag()});
    return {{"dim", m.dim}, {"entries", entries}};
}

CMat matrix_from_json(const nlohmann::json& j) {
    int dim = j.at("dim").get<int>();
    if (dim < 1) throw std::invalid_argument("matrix dim must be positive");
    const auto& entries = j.at("entries");
    if (entries.size() != static_cast<size_t>(dim) * dim)
        throw std::invalid_argument("matrix entry count mismatch");
    CMat m(dim);
    for (size_t k = 0; k < m.a.size(); ++k) {
        const auto& e = entries[k];
        m.a[k] = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
    return m;
}

namespace {

ojson bundle_to_json(uint32_t bundle) {
    ojson items = ojson::array();
    for (int i = 0; i < 32; ++i)
        if (bundle & (1u << i)) items.push_back(i);
    return items;
}

uint32_t bundle_from_json(const nlohmann::json& items) {
    uint32_t bundle = 0;
    for (const auto& it : items) {
        int i = it.get<int>();
        if (i < 0 || i >= 32) throw std::invalid_argument("item index out of range");
        bundle |= 1u << i;
    }
    return bundle;
}

}  // namespace

ojson oneway_to_json(const OneWayProtocol& p) {
    ojson branches;
    for (const auto& [bits, entry] : p.branches) {
        std::string key = std::to_string(bits.first) + std::to_string(bits.second);
        if (entry.quantum)
            branches[key] = {{"quantum", true}};
        else
            branches[key] = {{"bundle", bundle_to_json(entry.bundle)},
                             {"payment", entry.payment}};
    }
    ojson effects = ojson::array();
    for (const auto& e : p.effects)
        effects.push_back({{"matrix", matrix_to_json(e.effect)},
                           {"bundle", bundle_to_json(e.bundle)},
                           {"payment", e.payment}});
    return {{"dim", p.dim}, {"branches", branches}, {"effects", effects}};
}

OneWayProtocol oneway_from_json(const nlohmann::json& j) {
    OneWayProtocol p;
    p.dim = j.at("dim").get<int>();
    for (const auto& [key, val] : j.at("branches").items()) {
        if (key.size() != 2 || (key[0] != '0' && key[0] != '1') ||
            (key[1] != '0' && key[1] != '1'))
            throw std::invalid_argument("branch key must be two bits");
        BitPair bits{key[0] - '0', key[1] - '0'};
        BranchEntry entry;
        if (val.value("quantum", false)) {
            entry.quantum = true;
        } else {
            entry.bundle = bundle_from_json(val.at("bundle"));
            entry.payment = val.at("payment").get<double>();
        }
        p.branches[bits] = entry;
    }
    for (const auto& e : j.at("effects"))
        p.effects.push_back({matrix_from_json(e.at("matrix")), bundle_from_json(e.at("bundle")),
                             e.at("payment").get<double>()});
    return p;
}

}  // namespace qa
