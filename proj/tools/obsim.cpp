#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "obsim/experiments.hpp"
#include "obsim/io.hpp"
#include "obsim/version.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string manifest_path;
    std::string out_dir;
    int jobs = 0;  // 0: keep the config's value
    bool lenient = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Experiment configuration file (JSON)");
    cmd->add_option("--seed-from-manifest", opts.manifest_path,
                    "Re-run the resolved config recorded in a manifest");
    cmd->add_option("--out", opts.out_dir, "Output directory (overrides the config)");
    cmd->add_option("--jobs", opts.jobs, "Concurrent work items (overrides the config)");
    cmd->add_flag("--lenient{true},--strict{false}", opts.lenient,
                  "Ignore unknown config keys instead of rejecting them");
}

int run(const CommonOptions& opts, obsim::ExperimentType expected) {
    obsim::ExperimentConfig config;
    try {
        if (!opts.config_path.empty() == !opts.manifest_path.empty()) {
            throw obsim::ConfigError(
                "exactly one of --config and --seed-from-manifest is required");
        }
        if (!opts.config_path.empty()) {
            config = obsim::parse_config(obsim::read_file(opts.config_path), !opts.lenient);
        } else {
            config = obsim::config_from_manifest(obsim::read_file(opts.manifest_path));
        }
        if (config.experiment != expected) {
            throw obsim::ConfigError("config declares experiment type '" +
                                     obsim::to_string(config.experiment) +
                                     "' but the '" + obsim::to_string(expected) +
                                     "' subcommand was invoked");
        }
        if (!opts.out_dir.empty()) config.output.dir = opts.out_dir;
        if (opts.jobs > 0) config.jobs = opts.jobs;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return obsim::kExitConfigError;
    }

    const obsim::ExperimentResult result = obsim::run_experiment(config);
    for (const std::string& path : result.outputs) {
        std::cout << "wrote " << path << "\n";
    }
    if (!result.message.empty()) std::cerr << "error: " << result.message << "\n";
    return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optical bistability simulator for driven three-level atom-cavity systems"};
    app.set_version_flag("--version", OBSIM_VERSION);
    app.require_subcommand(1);

    static const struct {
        const char* name;
        const char* help;
        obsim::ExperimentType type;
    } kCommands[] = {
        {"steady", "Find all steady-state branches", obsim::ExperimentType::steady},
        {"evolve", "Integrate the equations of motion", obsim::ExperimentType::evolve},
        {"sweep", "Hysteresis sweep over one parameter", obsim::ExperimentType::sweep},
        {"grid", "Hysteresis-width map over a 2-D parameter grid", obsim::ExperimentType::grid},
        {"threshold", "Hysteresis width versus cooperativity", obsim::ExperimentType::threshold},
        {"detect", "Fluctuation-detector run", obsim::ExperimentType::detect},
    };

    CommonOptions opts[std::size(kCommands)];
    int exit_code = obsim::kExitOk;
    for (std::size_t i = 0; i < std::size(kCommands); ++i) {
        CLI::App* cmd = app.add_subcommand(kCommands[i].name, kCommands[i].help);
        add_common(cmd, opts[i]);
        const auto type = kCommands[i].type;
        const CommonOptions* o = &opts[i];
        cmd->callback([o, type, &exit_code] { exit_code = run(*o, type); });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return obsim::kExitConfigError;
    }
    return exit_code;
}
