#include "obsim/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>

#include "obsim/io.hpp"
#include "obsim/version.hpp"

namespace obsim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class OutputSink {
public:
    OutputSink(const OutputConfig& output) : dir_(output.dir), stem_(output.stem) {}

    std::string write(const std::string& suffix, std::string_view content) {
        const fs::path path = fs::path(dir_) / (stem_ + "_" + suffix);
        write_file_atomic(path, content);
        written_.push_back(path.string());
        return path.string();
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string dir_;
    std::string stem_;
    std::vector<std::string> written_;
};

json region_json(const BistableRegion& r) {
    return json{{"lo", r.lo}, {"hi", r.hi}, {"width", r.width}};
}

struct Summary {
    json data = json::object();
};

int run_steady(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto roots =
        find_all_branches(config.physical, std::span<const SemiclassicalState>{},
                          config.numerics);
    sink.write("roots.csv", roots_csv(roots));
    summary.data["n_roots"] = roots.size();
    if (roots.empty()) return kExitNumericalFailure;
    return kExitOk;
}

int run_evolve(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto& ev = std::get<EvolveExperiment>(config.payload);
    SemiclassicalState initial = cold_start_state();
    if (ev.initial == EvolveExperiment::Initial::steady) {
        const SteadyResult r =
            evolve_to_steady(cold_start_state(), config.physical, config.numerics);
        if (!r.converged) {
            summary.data["error"] = "initial steady state did not converge";
            return kExitNumericalFailure;
        }
        initial = r.state;
    }
    const Trajectory traj = evolve(initial, config.physical, ev.schedules, ev.t_end,
                                   ev.sample_dt, config.numerics);
    sink.write("trajectory.csv", trajectory_csv(traj));
    summary.data["samples"] = traj.size();
    summary.data["final_n"] = traj.photon_numbers.back();
    return kExitOk;
}

int run_sweep_experiment(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto& sw = std::get<SweepExperiment>(config.payload);
    const HysteresisCurve curve = run_sweep(config.physical, sw.spec, config.numerics);
    sink.write("curve.csv", curve_csv(curve));
    sink.write("regions.csv", regions_csv(curve));
    summary.data["width"] = curve.width;
    summary.data["n_regions"] = curve.regions.size();
    json regions = json::array();
    for (const BistableRegion& r : curve.regions) regions.push_back(region_json(r));
    summary.data["regions"] = std::move(regions);
    return kExitOk;
}

int run_grid(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto& gr = std::get<GridExperiment>(config.payload);
    const GridScanResult grid = grid_scan(config.physical, gr.spec, gr.axis1, gr.axis2,
                                          config.numerics, config.jobs);
    sink.write("grid.csv", grid_csv(grid));
    summary.data["cells"] = grid.widths.size();
    summary.data["missing"] = grid.missing;
    double max_width = 0.0;
    for (double w : grid.widths) {
        if (!std::isnan(w)) max_width = std::max(max_width, w);
    }
    summary.data["max_width"] = max_width;
    if (grid.missing == static_cast<int>(grid.widths.size())) return kExitNumericalFailure;
    if (!grid.acceptable(config.numerics)) return kExitPartialFailure;
    return kExitOk;
}

int run_threshold(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto& th = std::get<ThresholdExperiment>(config.payload);
    const ThresholdResult result =
        threshold_scan(config.physical, th.spec, th.c_values, th.width_floor,
                       config.numerics, config.jobs);
    sink.write("threshold.csv", threshold_csv(result));
    summary.data["width_floor"] = result.width_floor;
    summary.data["threshold_c"] = result.threshold_c;
    std::size_t failed = 0;
    for (const ThresholdEntry& e : result.entries) {
        if (!e.ok) ++failed;
    }
    summary.data["failed_entries"] = failed;
    if (failed == result.entries.size()) return kExitNumericalFailure;
    if (failed > 0) return kExitPartialFailure;
    return kExitOk;
}

int run_detect(const ExperimentConfig& config, OutputSink& sink, Summary& summary) {
    const auto& de = std::get<DetectExperiment>(config.payload);
    DetectorSpec spec;
    spec.params = config.physical;
    spec.schedule = de.schedule;
    spec.prep_sweep = de.spec;
    spec.branch = de.branch;
    spec.t_end = de.t_end;
    spec.sample_dt = de.sample_dt;

    if (!de.fwhm_values.empty()) {
        const SpeedLimitResult scan =
            speed_limit_scan(spec, de.fwhm_values, config.numerics, config.jobs);
        static constexpr std::string_view cols[] = {"fwhm", "latched", "n_before", "n_after"};
        CsvBuilder csv(cols);
        for (const SpeedLimitEntry& e : scan.entries) {
            const double row[] = {e.fwhm, e.latched ? 1.0 : 0.0, e.n_before, e.n_after};
            csv.add_row(row);
        }
        sink.write("speed.csv", csv.content());
        summary.data["smallest_latching_fwhm"] = scan.smallest_latching_fwhm;
        return kExitOk;
    }

    const DetectorRun run = run_detector(spec, config.numerics);
    sink.write("trajectory.csv", trajectory_csv(run.trajectory));
    json verdict;
    verdict["target"] = run.preparation.target;
    verdict["branch"] = to_string(run.preparation.branch);
    verdict["region"] = region_json(run.preparation.region);
    verdict["schedule"] = {{"target", to_string(de.schedule.target)},
                           {"amplitude", de.schedule.amplitude},
                           {"center", de.schedule.center},
                           {"fwhm", de.schedule.fwhm},
                           {"sigma", de.schedule.sigma()},
                           {"sigma_convention", to_string(de.schedule.sigma_convention)}};
    verdict["n_before"] = run.n_before;
    verdict["n_after"] = run.n_after;
    verdict["latched"] = run.latched;
    sink.write("verdict.json", verdict.dump(2) + "\n");
    summary.data["latched"] = run.latched;
    summary.data["n_before"] = run.n_before;
    summary.data["n_after"] = run.n_after;
    return kExitOk;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentResult result;
    OutputSink sink(config.output);
    Summary summary;

    try {
        switch (config.experiment) {
            case ExperimentType::steady: result.exit_code = run_steady(config, sink, summary); break;
            case ExperimentType::evolve: result.exit_code = run_evolve(config, sink, summary); break;
            case ExperimentType::sweep:
                result.exit_code = run_sweep_experiment(config, sink, summary);
                break;
            case ExperimentType::grid: result.exit_code = run_grid(config, sink, summary); break;
            case ExperimentType::threshold:
                result.exit_code = run_threshold(config, sink, summary);
                break;
            case ExperimentType::detect: result.exit_code = run_detect(config, sink, summary); break;
        }
    } catch (const SweepError& e) {
        result.exit_code = kExitNumericalFailure;
        result.message = e.what();
    } catch (const IntegrationError& e) {
        result.exit_code = kExitNumericalFailure;
        result.message = e.what();
    } catch (const BranchError& e) {
        result.exit_code = kExitNumericalFailure;
        result.message = e.what();
    } catch (const std::runtime_error& e) {
        result.exit_code = kExitNumericalFailure;
        result.message = e.what();
    }

    const auto stop = std::chrono::steady_clock::now();
    const double wall = std::chrono::duration<double>(stop - start).count();

    json manifest;
    manifest["tool"] = "obsim";
    manifest["version"] = OBSIM_VERSION;
    manifest["experiment"] = to_string(config.experiment);
    manifest["config"] = json::parse(resolved_config_json(config));
    if (config.cooperativity_input) {
        manifest["cooperativity_input"] = *config.cooperativity_input;
    }
    manifest["exit_code"] = result.exit_code;
    if (!result.message.empty()) manifest["error"] = result.message;
    manifest["summary"] = summary.data;
    manifest["wall_time_s"] = wall;

    std::vector<std::string> outputs = sink.written();
    manifest["outputs"] = outputs;
    try {
        const std::string manifest_path = sink.write("manifest.json", manifest.dump(2) + "\n");
        outputs.push_back(manifest_path);
    } catch (const std::exception& e) {
        result.exit_code = kExitNumericalFailure;
        if (result.message.empty()) result.message = e.what();
    }
    result.outputs = std::move(outputs);
    return result;
}

ExperimentConfig config_from_manifest(const std::string& manifest_text) {
    json doc;
    try {
        doc = json::parse(manifest_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("manifest: invalid JSON: ") + e.what());
    }
    if (!doc.contains("config")) {
        throw ConfigError("manifest: missing resolved config object");
    }
    return parse_config(doc["config"].dump(), /*strict=*/true);
}

}  // namespace obsim
