#ifndef OBSIM_EXPERIMENTS_HPP
#define OBSIM_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "obsim/config.hpp"

namespace obsim {

// Exit codes shared with the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitNumericalFailure = 3;
inline constexpr int kExitPartialFailure = 4;

struct ExperimentResult {
    int exit_code = kExitOk;
    std::vector<std::string> outputs;  // files written, in order
    std::string message;
};

// Executes the configured experiment, writes its CSV/JSON outputs atomically
// into output.dir, and finishes with a <stem>_manifest.json recording the
// resolved config, all numeric thresholds, outputs, wall time and version.
// Partial results stay on disk when the run fails partway.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Extracts the resolved config object from a manifest produced by
// run_experiment; re-running it reproduces the original outputs.
ExperimentConfig config_from_manifest(const std::string& manifest_text);

}  // namespace obsim

#endif
