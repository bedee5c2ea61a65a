#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "lfbm/config.hpp"

namespace lfbm::cli {

// exit codes: 0 all-pass, 1 check failure, 2 config error
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitConfigError = 2;

struct CommandSpec {
    std::string name;
    std::set<std::string> keys;
};

const std::vector<CommandSpec>& command_specs();

/// Run one subcommand against a fully-assembled config. Throws ConfigError
/// for invalid parameter values; returns an exit code otherwise.
int run_command(const std::string& name, const ExperimentConfig& cfg, std::ostream& log);

int cmd_fbm_sample(const ExperimentConfig& cfg, std::ostream& log);
int cmd_frac_apply(const ExperimentConfig& cfg, std::ostream& log);
int cmd_isometry(const ExperimentConfig& cfg, std::ostream& log);
int cmd_kernel_variance(const ExperimentConfig& cfg, std::ostream& log);
int cmd_norm_compare(const ExperimentConfig& cfg, std::ostream& log);
int cmd_cylindrical(const ExperimentConfig& cfg, std::ostream& log);
int cmd_heat(const ExperimentConfig& cfg, std::ostream& log);
int cmd_threshold_scan(const ExperimentConfig& cfg, std::ostream& log);

} // namespace lfbm::cli
