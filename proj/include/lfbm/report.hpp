#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace lfbm {

/// One oracle-vs-estimate row. Statistical checks pass iff |z| <= 4;
/// deterministic checks pass iff |estimate - oracle| <= tolerance.
struct CheckRow {
    std::string name;
    bool statistical = true;
    double oracle = 0.0;
    double estimate = 0.0;
    double se = 0.0;
    double z = 0.0;
    double tolerance = 0.0;
    bool pass = false;

    static CheckRow stat(const std::string& name, double oracle, double estimate, double se);
    static CheckRow det(const std::string& name, double oracle, double estimate, double tol);
};

struct RunReport {
    std::string command;
    std::map<std::string, std::string> config;
    std::vector<CheckRow> checks;
    double wall_seconds = 0.0; // console only, never serialized

    bool all_pass() const;
    void add(CheckRow row) { checks.push_back(std::move(row)); }

    /// Persisted artifact: config echo + checks; excludes wall-clock so
    /// identical configs give byte-identical files.
    std::string to_json() const;
    /// Console table including timing.
    void print(std::ostream& os) const;
};

} // namespace lfbm
