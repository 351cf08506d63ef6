#pragma once

#include <string>

#include "json.hpp"

#include "qauction/matrix.hpp"
#include "qauction/oneway.hpp"
#include "qauction/tolerances.hpp"

namespace qa {

using ojson = nlohmann::ordered_json;

// Machine-readable result envelope shared by every subcommand. Checks carry
// a measured value and its bound; the overall flag is the conjunction.
// Field order is fixed so identical runs serialize to identical bytes.
class Report {
  public:
    explicit Report(const std::string& subcommand);

    void config(const std::string& key, const ojson& value);
    void tolerances(const Tolerances& tol);

    // residual-style check: passes when value <= bound
    void check(const std::string& name, double value, double bound);
    // lower-bound-style check: passes when value >= bound
    void check_at_least(const std::string& name, double value, double bound);
    void check_flag(const std::string& name, bool pass);
    void stat(const std::string& name, const ojson& value);

    bool pass() const { return overall_; }
    // no timestamp unless asked: reproducible bytes are the default
    std::string render(bool with_timestamp) const;
    void write(const std::string& path, bool with_timestamp) const;

  private:
    ojson config_;
    ojson checks_ = ojson::array();
    ojson stats_;
    std::string subcommand_;
    bool overall_ = true;
};

ojson matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

// Protocol schema: branches keyed "b1b2" with bundle as 0-based item
// indices; quantum effects carry the matrix plus their labels.
ojson oneway_to_json(const OneWayProtocol& p);
OneWayProtocol oneway_from_json(const nlohmann::json& j);

}  // namespace qa
