#include "obsim/config.hpp"

#include <json.hpp>

#include <cmath>
#include <set>

namespace obsim {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config: " + path + ": " + what);
}

// Wraps one JSON object; tracks which keys were consumed so strict mode can
// reject leftovers.
class Section {
public:
    Section(const json& node, std::string path, bool strict)
        : node_(node), path_(std::move(path)), strict_(strict) {
        if (!node_.is_object()) fail(path_, "expected an object");
    }

    ~Section() = default;

    bool has(const std::string& key) const { return node_.contains(key); }

    const json& raw(const std::string& key) {
        used_.insert(key);
        return node_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) fail(path_ + "." + key, "expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double fallback) {
        return has(key) ? number(key) : fallback;
    }

    std::int64_t integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(path_ + "." + key, "expected an integer");
        return v.get<std::int64_t>();
    }

    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) fail(path_ + "." + key, "expected a string");
        return v.get<std::string>();
    }

    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }

    std::vector<double> number_list(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) fail(path_ + "." + key, "expected an array of numbers");
        std::vector<double> out;
        for (const json& e : v) {
            if (!e.is_number()) fail(path_ + "." + key, "expected an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }

    std::string path_of(const std::string& key) const { return path_ + "." + key; }

    void finish() const {
        if (!strict_) return;
        for (const auto& [key, value] : node_.items()) {
            if (!used_.count(key)) fail(path_ + "." + key, "unknown key");
        }
    }

    const json& node() const { return node_; }
    bool strict() const { return strict_; }

private:
    const json& node_;
    std::string path_;
    bool strict_;
    std::set<std::string> used_;
};

ScheduleTarget parse_schedule_target(const std::string& s, const std::string& path) {
    if (s == "delta_p") return ScheduleTarget::delta_p;
    if (s == "omega_c") return ScheduleTarget::omega_c;
    if (s == "epsilon") return ScheduleTarget::epsilon;
    fail(path, "expected one of delta_p, omega_c, epsilon");
}

SweepParameter parse_sweep_parameter(const std::string& s, const std::string& path) {
    if (s == "epsilon_sq") return SweepParameter::epsilon_sq;
    if (s == "delta_p") return SweepParameter::delta_p;
    if (s == "omega_c") return SweepParameter::omega_c;
    fail(path, "expected one of epsilon_sq, delta_p, omega_c");
}

GridParameter parse_grid_parameter(const std::string& s, const std::string& path) {
    if (s == "epsilon") return GridParameter::epsilon;
    if (s == "delta_p") return GridParameter::delta_p;
    if (s == "omega_c") return GridParameter::omega_c;
    fail(path, "expected one of epsilon, delta_p, omega_c");
}

double base_of_target(const PhysicalParams& p, ScheduleTarget target) {
    switch (target) {
        case ScheduleTarget::delta_p: return p.delta_p;
        case ScheduleTarget::omega_c: return p.omega_c;
        case ScheduleTarget::epsilon: return p.epsilon;
    }
    return 0.0;
}

PhysicalParams parse_physical(Section& root, std::optional<double>& c_input) {
    Section sec(root.raw("physical"), "physical", root.strict());
    PhysicalParams p;
    p.kappa = 1.0;
    if (sec.has("kappa")) fail("physical.kappa", "kappa is fixed to 1 and not configurable");
    p.gamma31 = sec.number("gamma31");
    p.gamma32 = sec.number("gamma32");
    p.deph2 = sec.number_or("deph2", 0.0);
    p.deph3 = sec.number_or("deph3", 0.0);
    p.n_atoms = sec.integer("n_atoms");
    p.omega_c = sec.number_or("omega_c", 0.0);
    p.epsilon = sec.number_or("epsilon", 0.0);
    p.delta_p = sec.number_or("delta_p", 0.0);
    p.delta1 = sec.number_or("delta1", 0.0);
    p.delta2 = sec.number_or("delta2", 0.0);

    const bool has_g = sec.has("g");
    const bool has_c = sec.has("cooperativity");
    if (has_g == has_c) {
        fail("physical", "exactly one of g and cooperativity must be given");
    }
    if (has_g) {
        p.g = sec.number("g");
    } else {
        const double c = sec.number("cooperativity");
        try {
            p.g = cooperativity_to_g(c, p);
        } catch (const std::invalid_argument& e) {
            fail("physical.cooperativity", e.what());
        }
        c_input = c;
    }
    sec.finish();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail("physical", e.what());
    }
    return p;
}

SweepSpec parse_sweep_spec(Section& parent, const std::string& key) {
    Section sec(parent.raw(key), parent.path_of(key), parent.strict());
    SweepSpec spec;
    spec.parameter = parse_sweep_parameter(sec.str("parameter"), sec.path_of("parameter"));
    spec.start = sec.number("start");
    spec.stop = sec.number("stop");
    const std::int64_t points = sec.integer("points");
    if (points < 2 || points > 1000000) fail(sec.path_of("points"), "points must be in [2, 1e6]");
    spec.points = static_cast<int>(points);
    const std::string mode = sec.str_or("mode", "newton");
    if (mode == "newton") {
        spec.mode = SweepMode::newton;
    } else if (mode == "integrate") {
        spec.mode = SweepMode::integrate;
    } else {
        fail(sec.path_of("mode"), "expected newton or integrate");
    }
    sec.finish();
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        fail(parent.path_of(key), e.what());
    }
    return spec;
}

GridAxisSpec parse_grid_axis(Section& parent, const std::string& key) {
    Section sec(parent.raw(key), parent.path_of(key), parent.strict());
    GridAxisSpec axis;
    axis.parameter = parse_grid_parameter(sec.str("parameter"), sec.path_of("parameter"));
    axis.start = sec.number("start");
    axis.stop = sec.number("stop");
    const std::int64_t points = sec.integer("points");
    if (points < 1 || points > 100000) fail(sec.path_of("points"), "points must be in [1, 1e5]");
    axis.points = static_cast<int>(points);
    sec.finish();
    return axis;
}

Schedule parse_schedule(Section& sec, const PhysicalParams& p) {
    Schedule s;
    s.target = parse_schedule_target(sec.str("target"), sec.path_of("target"));
    s.base = base_of_target(p, s.target);
    const bool has_abs = sec.has("amplitude");
    const bool has_rel = sec.has("amplitude_rel");
    if (has_abs == has_rel) {
        fail(sec.path_of("amplitude"),
             "exactly one of amplitude and amplitude_rel must be given");
    }
    s.amplitude = has_abs ? sec.number("amplitude") : sec.number("amplitude_rel") * s.base;
    s.center = sec.number("center");
    s.fwhm = sec.number("fwhm");
    const std::string conv = sec.str_or("sigma_convention", "primary");
    if (conv == "primary") {
        s.sigma_convention = SigmaConvention::primary;
    } else if (conv == "standard") {
        s.sigma_convention = SigmaConvention::standard;
    } else {
        fail(sec.path_of("sigma_convention"), "expected primary or standard");
    }
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        fail(sec.path_of("fwhm"), e.what());
    }
    return s;
}

void parse_numerics(Section& root, Numerics& n) {
    if (!root.has("numerics")) return;
    Section sec(root.raw("numerics"), "numerics", root.strict());
    n.rtol = sec.number_or("rtol", n.rtol);
    n.atol = sec.number_or("atol", n.atol);
    n.max_step = sec.number_or("max_step", n.max_step);
    n.population_guard = sec.number_or("population_guard", n.population_guard);
    n.steady_tol = sec.number_or("steady_tol", n.steady_tol);
    n.steady_window = sec.number_or("steady_window", n.steady_window);
    n.steady_t_max = sec.number_or("steady_t_max", n.steady_t_max);
    n.newton_tol = sec.number_or("newton_tol", n.newton_tol);
    n.newton_max_iter = static_cast<int>(sec.has("newton_max_iter")
                                             ? sec.integer("newton_max_iter")
                                             : n.newton_max_iter);
    n.newton_max_backtrack = static_cast<int>(sec.has("newton_max_backtrack")
                                                  ? sec.integer("newton_max_backtrack")
                                                  : n.newton_max_backtrack);
    n.jacobian_step = sec.number_or("jacobian_step", n.jacobian_step);
    n.stability_margin = sec.number_or("stability_margin", n.stability_margin);
    n.dedup_tol = sec.number_or("dedup_tol", n.dedup_tol);
    n.gap_threshold = sec.number_or("gap_threshold", n.gap_threshold);
    n.jump_median_factor = sec.number_or("jump_median_factor", n.jump_median_factor);
    n.jump_rel_change = sec.number_or("jump_rel_change", n.jump_rel_change);
    n.max_gap_fraction = sec.number_or("max_gap_fraction", n.max_gap_fraction);
    n.latch_threshold = sec.number_or("latch_threshold", n.latch_threshold);
    n.latch_floor = sec.number_or("latch_floor", n.latch_floor);
    n.detect_window = sec.number_or("detect_window", n.detect_window);
    sec.finish();
    for (double v : {n.rtol, n.atol, n.steady_tol, n.newton_tol}) {
        if (!(v > 0.0)) fail("numerics", "tolerances must be > 0");
    }
}

}  // namespace

std::string to_string(ExperimentType t) {
    switch (t) {
        case ExperimentType::steady: return "steady";
        case ExperimentType::evolve: return "evolve";
        case ExperimentType::sweep: return "sweep";
        case ExperimentType::grid: return "grid";
        case ExperimentType::threshold: return "threshold";
        case ExperimentType::detect: return "detect";
    }
    return "?";
}

ExperimentConfig parse_config(const std::string& text, bool strict) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    Section root(doc, "$", strict);

    ExperimentConfig config;
    config.physical = parse_physical(root, config.cooperativity_input);
    parse_numerics(root, config.numerics);

    if (root.has("output")) {
        Section sec(root.raw("output"), "output", strict);
        config.output.dir = sec.str_or("dir", ".");
        config.output.stem = sec.str_or("stem", "run");
        sec.finish();
    }
    if (root.has("jobs")) {
        const std::int64_t jobs = root.integer("jobs");
        if (jobs < 1 || jobs > 1024) fail("$.jobs", "jobs must be in [1, 1024]");
        config.jobs = static_cast<int>(jobs);
    }

    Section exp(root.raw("experiment"), "experiment", strict);
    const std::string type = exp.str("type");
    if (type == "steady") {
        config.experiment = ExperimentType::steady;
        config.payload = SteadyExperiment{};
        if (exp.has("steady")) {
            Section sec(exp.raw("steady"), "experiment.steady", strict);
            sec.finish();
        }
    } else if (type == "evolve") {
        config.experiment = ExperimentType::evolve;
        EvolveExperiment ev;
        Section sec(exp.raw("evolve"), "experiment.evolve", strict);
        ev.t_end = sec.number("t_end");
        if (!(ev.t_end > 0.0)) fail("experiment.evolve.t_end", "must be > 0");
        ev.sample_dt = sec.number_or("sample_dt", 0.1);
        if (!(ev.sample_dt > 0.0)) fail("experiment.evolve.sample_dt", "must be > 0");
        const std::string initial = sec.str_or("initial", "cold");
        if (initial == "cold") {
            ev.initial = EvolveExperiment::Initial::cold;
        } else if (initial == "steady") {
            ev.initial = EvolveExperiment::Initial::steady;
        } else {
            fail("experiment.evolve.initial", "expected cold or steady");
        }
        if (sec.has("schedules")) {
            const json& arr = sec.raw("schedules");
            if (!arr.is_array()) fail("experiment.evolve.schedules", "expected an array");
            for (std::size_t i = 0; i < arr.size(); ++i) {
                Section ssec(arr[i], "experiment.evolve.schedules[" + std::to_string(i) + "]",
                             strict);
                ev.schedules.push_back(parse_schedule(ssec, config.physical));
                ssec.finish();
            }
        }
        sec.finish();
        config.payload = std::move(ev);
    } else if (type == "sweep") {
        config.experiment = ExperimentType::sweep;
        SweepExperiment sw;
        sw.spec = parse_sweep_spec(exp, "sweep");
        config.payload = sw;
    } else if (type == "grid") {
        config.experiment = ExperimentType::grid;
        GridExperiment gr;
        gr.spec = parse_sweep_spec(exp, "sweep");
        gr.axis1 = parse_grid_axis(exp, "axis1");
        gr.axis2 = parse_grid_axis(exp, "axis2");
        config.payload = gr;
    } else if (type == "threshold") {
        config.experiment = ExperimentType::threshold;
        ThresholdExperiment th;
        th.spec = parse_sweep_spec(exp, "sweep");
        th.c_values = exp.number_list("c_values");
        if (th.c_values.empty()) fail("experiment.c_values", "must be nonempty");
        if (!std::is_sorted(th.c_values.begin(), th.c_values.end())) {
            fail("experiment.c_values", "must be sorted ascending");
        }
        for (double c : th.c_values) {
            if (c < 0.0) fail("experiment.c_values", "must be nonnegative");
        }
        th.width_floor = exp.number_or("width_floor", 0.0);
        config.payload = std::move(th);
    } else if (type == "detect") {
        config.experiment = ExperimentType::detect;
        DetectExperiment de;
        de.spec = parse_sweep_spec(exp, "sweep");
        Section ssec(exp.raw("schedule"), "experiment.schedule", strict);
        de.schedule = parse_schedule(ssec, config.physical);
        ssec.finish();
        const std::string branch = exp.str("branch");
        if (branch == "upper") {
            de.branch = Branch::upper;
        } else if (branch == "lower") {
            de.branch = Branch::lower;
        } else {
            fail("experiment.branch", "expected upper or lower");
        }
        de.t_end = exp.number_or("t_end", 0.0);
        de.sample_dt = exp.number_or("sample_dt", 0.1);
        if (!(de.sample_dt > 0.0)) fail("experiment.sample_dt", "must be > 0");
        if (exp.has("fwhm_values")) {
            de.fwhm_values = exp.number_list("fwhm_values");
            if (!std::is_sorted(de.fwhm_values.begin(), de.fwhm_values.end())) {
                fail("experiment.fwhm_values", "must be sorted ascending");
            }
            for (double f : de.fwhm_values) {
                if (!(f > 0.0)) fail("experiment.fwhm_values", "must be positive");
            }
        }
        config.payload = std::move(de);
    } else {
        fail("experiment.type",
             "expected one of steady, evolve, sweep, grid, threshold, detect");
    }
    exp.finish();
    root.finish();
    return config;
}

namespace {

json sweep_spec_json(const SweepSpec& spec) {
    return json{{"parameter", to_string(spec.parameter)},
                {"start", spec.start},
                {"stop", spec.stop},
                {"points", spec.points},
                {"mode", to_string(spec.mode)}};
}

json grid_axis_json(const GridAxisSpec& axis) {
    return json{{"parameter", to_string(axis.parameter)},
                {"start", axis.start},
                {"stop", axis.stop},
                {"points", axis.points}};
}

json schedule_json(const Schedule& s) {
    return json{{"target", to_string(s.target)},
                {"amplitude", s.amplitude},
                {"center", s.center},
                {"fwhm", s.fwhm},
                {"sigma_convention", to_string(s.sigma_convention)}};
}

}  // namespace

std::string resolved_config_json(const ExperimentConfig& config) {
    const PhysicalParams& p = config.physical;
    const Numerics& n = config.numerics;
    json doc;
    doc["physical"] = {{"gamma31", p.gamma31}, {"gamma32", p.gamma32},
                       {"deph2", p.deph2},     {"deph3", p.deph3},
                       {"g", p.g},             {"n_atoms", p.n_atoms},
                       {"omega_c", p.omega_c}, {"epsilon", p.epsilon},
                       {"delta_p", p.delta_p}, {"delta1", p.delta1},
                       {"delta2", p.delta2}};
    doc["numerics"] = {{"rtol", n.rtol},
                       {"atol", n.atol},
                       {"max_step", n.max_step},
                       {"population_guard", n.population_guard},
                       {"steady_tol", n.steady_tol},
                       {"steady_window", n.steady_window},
                       {"steady_t_max", n.steady_t_max},
                       {"newton_tol", n.newton_tol},
                       {"newton_max_iter", n.newton_max_iter},
                       {"newton_max_backtrack", n.newton_max_backtrack},
                       {"jacobian_step", n.jacobian_step},
                       {"stability_margin", n.stability_margin},
                       {"dedup_tol", n.dedup_tol},
                       {"gap_threshold", n.gap_threshold},
                       {"jump_median_factor", n.jump_median_factor},
                       {"jump_rel_change", n.jump_rel_change},
                       {"max_gap_fraction", n.max_gap_fraction},
                       {"latch_threshold", n.latch_threshold},
                       {"latch_floor", n.latch_floor},
                       {"detect_window", n.detect_window}};
    doc["output"] = {{"dir", config.output.dir}, {"stem", config.output.stem}};
    doc["jobs"] = config.jobs;

    json exp;
    exp["type"] = to_string(config.experiment);
    switch (config.experiment) {
        case ExperimentType::steady:
            break;
        case ExperimentType::evolve: {
            const auto& ev = std::get<EvolveExperiment>(config.payload);
            json schedules = json::array();
            for (const Schedule& s : ev.schedules) schedules.push_back(schedule_json(s));
            exp["evolve"] = {{"t_end", ev.t_end},
                             {"sample_dt", ev.sample_dt},
                             {"initial",
                              ev.initial == EvolveExperiment::Initial::cold ? "cold" : "steady"},
                             {"schedules", schedules}};
            break;
        }
        case ExperimentType::sweep: {
            exp["sweep"] = sweep_spec_json(std::get<SweepExperiment>(config.payload).spec);
            break;
        }
        case ExperimentType::grid: {
            const auto& gr = std::get<GridExperiment>(config.payload);
            exp["sweep"] = sweep_spec_json(gr.spec);
            exp["axis1"] = grid_axis_json(gr.axis1);
            exp["axis2"] = grid_axis_json(gr.axis2);
            break;
        }
        case ExperimentType::threshold: {
            const auto& th = std::get<ThresholdExperiment>(config.payload);
            exp["sweep"] = sweep_spec_json(th.spec);
            exp["c_values"] = th.c_values;
            exp["width_floor"] = th.width_floor;
            break;
        }
        case ExperimentType::detect: {
            const auto& de = std::get<DetectExperiment>(config.payload);
            exp["sweep"] = sweep_spec_json(de.spec);
            exp["schedule"] = schedule_json(de.schedule);
            exp["branch"] = to_string(de.branch);
            exp["t_end"] = de.t_end;
            exp["sample_dt"] = de.sample_dt;
            if (!de.fwhm_values.empty()) exp["fwhm_values"] = de.fwhm_values;
            break;
        }
    }
    doc["experiment"] = std::move(exp);
    return doc.dump(2) + "\n";
}

}  // namespace obsim
