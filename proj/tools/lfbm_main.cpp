#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "../src/cli/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Liouville fractional Brownian motion toolkit"};
    app.require_subcommand(1);

    struct SubState {
        std::string config_file;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, SubState> states;

    for (const auto& spec : lfbm::cli::command_specs()) {
        CLI::App* sub = app.add_subcommand(spec.name);
        SubState& st = states[spec.name];
        sub->add_option("--config", st.config_file, "key=value config file");
        for (const auto& key : spec.keys) {
            sub->add_option_function<std::string>(
                "--" + key, [&st, key](const std::string& v) { st.flags[key] = v; });
        }
    }

    CLI11_PARSE(app, argc, argv);

    const auto subs = app.get_subcommands();
    if (subs.empty()) return lfbm::cli::kExitConfigError;
    const std::string name = subs.front()->get_name();

    try {
        const auto& specs = lfbm::cli::command_specs();
        const auto it = std::find_if(specs.begin(), specs.end(),
                                     [&](const auto& s) { return s.name == name; });
        lfbm::ExperimentConfig cfg(it->keys);
        const SubState& st = states[name];
        if (!st.config_file.empty()) cfg.load_file(st.config_file);
        for (const auto& [k, v] : st.flags) cfg.set(k, v); // flags override the file
        return lfbm::cli::run_command(name, cfg, std::cout);
    } catch (const lfbm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return lfbm::cli::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return lfbm::cli::kExitCheckFailure;
    }
}
