#include "lfbm/report.hpp"

#include <cmath>
#include <iomanip>

#include <json.hpp>

namespace lfbm {

CheckRow CheckRow::stat(const std::string& name, double oracle, double estimate, double se) {
    CheckRow r;
    r.name = name;
    r.statistical = true;
    r.oracle = oracle;
    r.estimate = estimate;
    r.se = se;
    r.z = se > 0.0 ? (estimate - oracle) / se : (estimate == oracle ? 0.0 : INFINITY);
    r.pass = std::abs(r.z) <= 4.0;
    return r;
}

CheckRow CheckRow::det(const std::string& name, double oracle, double estimate, double tol) {
    CheckRow r;
    r.name = name;
    r.statistical = false;
    r.oracle = oracle;
    r.estimate = estimate;
    r.tolerance = tol;
    r.pass = std::abs(estimate - oracle) <= tol;
    return r;
}

bool RunReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string RunReport::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    nlohmann::json cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json r;
        r["name"] = c.name;
        r["kind"] = c.statistical ? "statistical" : "deterministic";
        r["oracle"] = c.oracle;
        r["estimate"] = c.estimate;
        if (c.statistical) {
            r["se"] = c.se;
            r["z"] = c.z;
        } else {
            r["tolerance"] = c.tolerance;
        }
        r["pass"] = c.pass;
        rows.push_back(r);
    }
    j["checks"] = rows;
    j["pass"] = all_pass();
    return j.dump(2);
}

void RunReport::print(std::ostream& os) const {
    os << "== " << command << " ==\n";
    for (const auto& c : checks) {
        os << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << ": oracle=" << c.oracle
           << " estimate=" << c.estimate;
        if (c.statistical)
            os << " se=" << c.se << " z=" << c.z;
        else
            os << " tol=" << c.tolerance;
        os << "\n";
    }
    os << (all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "  (" << std::fixed
       << std::setprecision(2) << wall_seconds << " s)\n";
}

} // namespace lfbm
