#ifndef OBSIM_CONFIG_HPP
#define OBSIM_CONFIG_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "obsim/detect.hpp"
#include "obsim/model.hpp"
#include "obsim/numerics.hpp"
#include "obsim/schedule.hpp"
#include "obsim/sweep.hpp"

namespace obsim {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ExperimentType { steady, evolve, sweep, grid, threshold, detect };
std::string to_string(ExperimentType t);

struct SteadyExperiment {};

struct EvolveExperiment {
    enum class Initial { cold, steady };
    double t_end = 100.0;
    double sample_dt = 0.1;
    Initial initial = Initial::cold;
    std::vector<Schedule> schedules;
};

struct SweepExperiment {
    SweepSpec spec;
};

struct GridExperiment {
    SweepSpec spec;
    GridAxisSpec axis1, axis2;
};

struct ThresholdExperiment {
    SweepSpec spec;
    std::vector<double> c_values;
    double width_floor = 0.0;  // 0 selects the two-grid-step default
};

struct DetectExperiment {
    SweepSpec spec;       // preparation sweep over the scheduled parameter
    Schedule schedule;    // base is filled from the physical block
    Branch branch = Branch::upper;
    double t_end = 0.0;   // 0 selects the default
    double sample_dt = 0.1;
    std::vector<double> fwhm_values;  // nonempty switches to a speed-limit scan
};

struct OutputConfig {
    std::string dir = ".";
    std::string stem = "run";
};

struct ExperimentConfig {
    PhysicalParams physical;
    std::optional<double> cooperativity_input;  // set when g was given as C
    ExperimentType experiment = ExperimentType::steady;
    std::variant<SteadyExperiment, EvolveExperiment, SweepExperiment, GridExperiment,
                 ThresholdExperiment, DetectExperiment>
        payload;
    Numerics numerics;
    OutputConfig output;
    int jobs = 1;
};

// Parses and validates the JSON experiment document. In strict mode any
// unknown key is rejected; errors carry the offending key path.
ExperimentConfig parse_config(const std::string& text, bool strict = true);

// Fully resolved JSON (g instead of cooperativity, every default written
// out); parse_config(resolved_config_json(c)) reproduces c exactly.
std::string resolved_config_json(const ExperimentConfig& config);

}  // namespace obsim

#endif
