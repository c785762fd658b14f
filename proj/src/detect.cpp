#include "obsim/detect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "obsim/parallel.hpp"
#include "obsim/steady.hpp"

namespace obsim {

namespace {

bool targets_match(ScheduleTarget schedule, SweepParameter sweep) {
    switch (schedule) {
        case ScheduleTarget::delta_p: return sweep == SweepParameter::delta_p;
        case ScheduleTarget::omega_c: return sweep == SweepParameter::omega_c;
        case ScheduleTarget::epsilon: return sweep == SweepParameter::epsilon_sq;
    }
    return false;
}

// Axis value corresponding to the schedule's equilibrium point.
double axis_value_of_base(const Schedule& schedule, SweepParameter parameter,
                          double kappa) {
    if (schedule.target == ScheduleTarget::epsilon &&
        parameter == SweepParameter::epsilon_sq) {
        const double e = schedule.base / kappa;
        return e * e;
    }
    return schedule.base;
}

double window_mean(const Trajectory& traj, double t_lo, double t_hi) {
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (traj.times[i] >= t_lo && traj.times[i] <= t_hi) {
            sum += traj.photon_numbers[i];
            ++count;
        }
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

DetectorRun run_prepared(const DetectorSpec& spec, const PreparedBranch& prep,
                         const Numerics& num) {
    const double sigma = spec.schedule.sigma();
    const double center = spec.schedule.center;
    const double w = num.detect_window;
    if (center - 5.0 * sigma - w < 0.0) {
        throw std::invalid_argument(
            "run_detector: pulse center too early for the pre-pulse window");
    }
    double t_end = spec.t_end;
    if (t_end <= 0.0) t_end = center + std::max(10.0 * sigma, 100.0);
    if (t_end < center + 5.0 * sigma + w) {
        throw std::invalid_argument(
            "run_detector: t_end does not leave room for the post-pulse window");
    }

    DetectorRun run;
    run.spec = spec;
    run.preparation = prep;
    const Schedule schedules[] = {spec.schedule};
    run.trajectory = evolve(prep.state, spec.params, schedules, t_end, spec.sample_dt, num);
    run.n_before = window_mean(run.trajectory, center - 5.0 * sigma - w, center - 5.0 * sigma);
    run.n_after = window_mean(run.trajectory, center + 5.0 * sigma, center + 5.0 * sigma + w);
    const double scale = std::max({run.n_before, run.n_after, num.latch_floor});
    run.latched = std::abs(run.n_after - run.n_before) / scale > num.latch_threshold;
    return run;
}

}  // namespace

std::string to_string(Branch b) { return b == Branch::upper ? "upper" : "lower"; }

PreparedBranch prepare_on_branch(const PhysicalParams& params, const SweepSpec& spec,
                                 double target, Branch branch, const Numerics& num) {
    const double extra[] = {target};
    PreparedBranch prep;
    prep.target = target;
    prep.branch = branch;
    prep.curve = run_sweep(params, spec, extra, num);

    const auto inside = [&](const BistableRegion& r) {
        return r.lo < target && target < r.hi;
    };
    const auto it = std::find_if(prep.curve.regions.begin(), prep.curve.regions.end(), inside);
    if (it == prep.curve.regions.end()) {
        std::ostringstream msg;
        msg << "prepare_on_branch: target " << target << " is not inside a bistable region";
        if (!prep.curve.regions.empty()) {
            const auto nearest = std::min_element(
                prep.curve.regions.begin(), prep.curve.regions.end(),
                [&](const BistableRegion& a, const BistableRegion& b) {
                    const double da = std::min(std::abs(target - a.lo), std::abs(target - a.hi));
                    const double db = std::min(std::abs(target - b.lo), std::abs(target - b.hi));
                    return da < db;
                });
            msg << "; nearest region is [" << nearest->lo << ", " << nearest->hi << "]";
        } else {
            msg << "; no bistable region was detected on this sweep";
        }
        throw BranchError(msg.str());
    }
    prep.region = *it;

    const auto pos = std::lower_bound(prep.curve.axis.begin(), prep.curve.axis.end(), target);
    const std::size_t idx = static_cast<std::size_t>(pos - prep.curve.axis.begin());
    const double n_up = prep.curve.n_up[idx];
    const double n_down = prep.curve.n_down[idx];
    if (std::isnan(n_up) || std::isnan(n_down)) {
        throw BranchError("prepare_on_branch: a pass failed to converge at the target");
    }
    const bool up_is_upper = n_up >= n_down;
    const bool want_up_pass = (branch == Branch::upper) == up_is_upper;
    const SemiclassicalState& state =
        want_up_pass ? prep.curve.states_up[idx] : prep.curve.states_down[idx];

    const PhysicalParams p = apply_sweep_value(params, spec.parameter, target);
    const SteadyPoint point = solve_steady(p, state, num);
    if (!point.converged || point.stability == Stability::unstable) {
        throw BranchError("prepare_on_branch: branch state at the target is not a stable root");
    }
    prep.state = point.state;
    return prep;
}

DetectorRun run_detector(const DetectorSpec& spec, const Numerics& num) {
    spec.schedule.validate();
    if (!targets_match(spec.schedule.target, spec.prep_sweep.parameter)) {
        throw std::invalid_argument(
            "run_detector: preparation sweep must scan the scheduled parameter");
    }
    const double target =
        axis_value_of_base(spec.schedule, spec.prep_sweep.parameter, spec.params.kappa);
    const PreparedBranch prep =
        prepare_on_branch(spec.params, spec.prep_sweep, target, spec.branch, num);
    return run_prepared(spec, prep, num);
}

SpeedLimitResult speed_limit_scan(const DetectorSpec& spec,
                                  std::span<const double> fwhm_values, const Numerics& num,
                                  int jobs) {
    if (fwhm_values.empty()) {
        throw std::invalid_argument("speed_limit_scan: fwhm_values must be nonempty");
    }
    if (!std::is_sorted(fwhm_values.begin(), fwhm_values.end())) {
        throw std::invalid_argument("speed_limit_scan: fwhm_values must be sorted ascending");
    }
    for (double f : fwhm_values) {
        if (!(f > 0.0)) {
            throw std::invalid_argument("speed_limit_scan: fwhm_values must be positive");
        }
    }
    if (!targets_match(spec.schedule.target, spec.prep_sweep.parameter)) {
        throw std::invalid_argument(
            "speed_limit_scan: preparation sweep must scan the scheduled parameter");
    }

    const double target =
        axis_value_of_base(spec.schedule, spec.prep_sweep.parameter, spec.params.kappa);
    const PreparedBranch prep =
        prepare_on_branch(spec.params, spec.prep_sweep, target, spec.branch, num);

    SpeedLimitResult result;
    result.entries.resize(fwhm_values.size());
    parallel_for(fwhm_values.size(), jobs, [&](std::size_t i) {
        DetectorSpec s = spec;
        s.schedule.fwhm = fwhm_values[i];
        const DetectorRun run = run_prepared(s, prep, num);
        result.entries[i] = {fwhm_values[i], run.latched, run.n_before, run.n_after};
    });

    result.smallest_latching_fwhm = std::numeric_limits<double>::quiet_NaN();
    for (const SpeedLimitEntry& e : result.entries) {
        if (e.latched) {
            result.smallest_latching_fwhm = e.fwhm;
            break;
        }
    }
    return result;
}

}  // namespace obsim
