#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>

namespace lfbm {

/// Flat key=value configuration. Lines starting with '#' and blank lines are
/// ignored. Unknown keys are rejected so runs stay auditable.
class ExperimentConfig {
public:
    explicit ExperimentConfig(std::set<std::string> known_keys);

    void load_file(const std::string& path);
    void load_text(const std::string& text);
    void set(const std::string& key, const std::string& value);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }

private:
    std::set<std::string> known_;
    std::map<std::string, std::string> kv_;
};

/// Error type the CLI maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace lfbm
