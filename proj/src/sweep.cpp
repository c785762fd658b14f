#include "obsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "obsim/integrate.hpp"
#include "obsim/parallel.hpp"
#include "obsim/steady.hpp"

namespace obsim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SettleResult {
    SemiclassicalState state;
    bool ok = false;
};

// Steady state at fixed parameters from a warm start. Newton mode accepts a
// converged non-unstable root; at a fold it relaxes the warm start by a
// coarse time evolution just long enough to identify the surviving basin and
// lets Newton land the root. Integrate mode is the plain
// evolve-until-residual protocol.
SettleResult settle(const PhysicalParams& p, const SemiclassicalState& warm,
                    SweepMode mode, const Numerics& num) {
    SettleResult r;
    if (mode == SweepMode::newton) {
        const SteadyPoint sp = solve_steady(p, warm, num);
        if (sp.converged && sp.stability != Stability::unstable) {
            r.state = sp.state;
            r.ok = true;
            return r;
        }
        try {
            Numerics coarse = num;
            coarse.steady_tol = std::max(num.steady_tol, 1e-5);
            const SteadyResult sr = evolve_to_steady(warm, p, coarse);
            const SteadyPoint polished = solve_steady(p, sr.state, num);
            if (polished.converged && polished.stability != Stability::unstable) {
                r.state = polished.state;
                r.ok = true;
                return r;
            }
            // the coarse stop may sit near a saddle; only a strict
            // integration can resolve where the dynamics actually settle
            const SteadyResult strict = evolve_to_steady(sr.state, p, num);
            if (strict.converged) {
                r.state = strict.state;
                r.ok = true;
            }
        } catch (const IntegrationError&) {
        }
        return r;
    }
    try {
        const SteadyResult sr = evolve_to_steady(warm, p, num);
        if (sr.converged) {
            r.state = sr.state;
            r.ok = true;
        }
    } catch (const IntegrationError&) {
    }
    return r;
}

std::vector<double> detect_jumps(const std::vector<double>& axis,
                                 const std::vector<double>& n, const Numerics& num) {
    std::vector<double> deltas;
    deltas.reserve(n.size());
    for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        if (std::isnan(n[i]) || std::isnan(n[i + 1])) continue;
        deltas.push_back(std::abs(n[i + 1] - n[i]));
    }
    if (deltas.empty()) return {};
    std::sort(deltas.begin(), deltas.end());
    const double median = deltas[deltas.size() / 2];

    std::vector<double> jumps;
    for (std::size_t i = 0; i + 1 < n.size(); ++i) {
        if (std::isnan(n[i]) || std::isnan(n[i + 1])) continue;
        const double dn = std::abs(n[i + 1] - n[i]);
        const double threshold = std::max(num.jump_median_factor * median,
                                          num.jump_rel_change * std::max(n[i], n[i + 1]));
        if (dn > threshold && dn > 0.0) {
            jumps.push_back(0.5 * (axis[i] + axis[i + 1]));
        }
    }
    return jumps;
}

void extract_regions(HysteresisCurve& curve, const Numerics& num) {
    const std::size_t n = curve.axis.size();
    std::vector<bool> disagree(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        const double up = curve.n_up[i];
        const double down = curve.n_down[i];
        if (std::isnan(up) || std::isnan(down)) continue;
        const double scale = std::max({up, down, num.latch_floor});
        disagree[i] = std::abs(up - down) / scale > num.gap_threshold;
    }

    curve.regions.clear();
    std::size_t i = 0;
    while (i < n) {
        if (!disagree[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < n && disagree[j + 1]) ++j;
        BistableRegion region;
        region.lo = i > 0 ? 0.5 * (curve.axis[i - 1] + curve.axis[i]) : curve.axis.front();
        region.hi =
            j + 1 < n ? 0.5 * (curve.axis[j] + curve.axis[j + 1]) : curve.axis.back();
        region.width = region.hi - region.lo;
        curve.regions.push_back(region);
        i = j + 1;
    }

    curve.width = 0.0;
    for (const BistableRegion& r : curve.regions) {
        curve.width = std::max(curve.width, r.width);
    }
}

}  // namespace

std::string to_string(SweepParameter p) {
    switch (p) {
        case SweepParameter::epsilon_sq: return "epsilon_sq";
        case SweepParameter::delta_p: return "delta_p";
        case SweepParameter::omega_c: return "omega_c";
    }
    return "?";
}

std::string to_string(SweepMode m) {
    return m == SweepMode::integrate ? "integrate" : "newton";
}

std::string to_string(GridParameter p) {
    switch (p) {
        case GridParameter::epsilon: return "epsilon";
        case GridParameter::delta_p: return "delta_p";
        case GridParameter::omega_c: return "omega_c";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (points < 2) throw std::invalid_argument("SweepSpec: points must be >= 2");
    if (!(start != stop)) throw std::invalid_argument("SweepSpec: start must differ from stop");
    if (!std::isfinite(start) || !std::isfinite(stop)) {
        throw std::invalid_argument("SweepSpec: bounds must be finite");
    }
    if (parameter == SweepParameter::epsilon_sq && (start < 0.0 || stop < 0.0)) {
        throw std::invalid_argument("SweepSpec: epsilon_sq axis must be nonnegative");
    }
    if (parameter == SweepParameter::omega_c && (start < 0.0 || stop < 0.0)) {
        throw std::invalid_argument("SweepSpec: omega_c axis must be nonnegative");
    }
}

double SweepSpec::grid_step() const {
    return std::abs(stop - start) / static_cast<double>(points - 1);
}

PhysicalParams apply_sweep_value(const PhysicalParams& base, SweepParameter parameter,
                                 double value) {
    PhysicalParams p = base;
    switch (parameter) {
        case SweepParameter::epsilon_sq: p.epsilon = std::sqrt(value) * p.kappa; break;
        case SweepParameter::delta_p: p.delta_p = value; break;
        case SweepParameter::omega_c: p.omega_c = value; break;
    }
    return p;
}

HysteresisCurve run_sweep(const PhysicalParams& params, const SweepSpec& spec,
                          std::span<const double> extra_points, const Numerics& num) {
    params.validate();
    spec.validate();

    const double lo = std::min(spec.start, spec.stop);
    const double hi = std::max(spec.start, spec.stop);
    std::vector<double> axis;
    axis.reserve(static_cast<std::size_t>(spec.points) + extra_points.size());
    for (int i = 0; i < spec.points; ++i) {
        axis.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                static_cast<double>(spec.points - 1));
    }
    for (double x : extra_points) {
        if (x < lo || x > hi) {
            throw std::invalid_argument("run_sweep: extra point outside the axis range");
        }
        axis.push_back(x);
    }
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
    const std::size_t n = axis.size();

    HysteresisCurve curve;
    curve.parameter = spec.parameter;
    curve.axis = axis;
    curve.n_up.assign(n, kNaN);
    curve.n_down.assign(n, kNaN);
    curve.states_up.assign(n, SemiclassicalState{});
    curve.states_down.assign(n, SemiclassicalState{});

    const auto pass = [&](bool ascending, std::vector<double>& n_out,
                          std::vector<SemiclassicalState>& states_out, int& gaps) {
        SemiclassicalState warm = cold_start_state();
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t i = ascending ? k : n - 1 - k;
            const PhysicalParams p = apply_sweep_value(params, spec.parameter, axis[i]);
            const SettleResult r = settle(p, warm, spec.mode, num);
            if (r.ok) {
                warm = r.state;
                n_out[i] = photon_number(r.state);
                states_out[i] = r.state;
            } else {
                ++gaps;  // keep the previous warm start
            }
        }
    };

    pass(true, curve.n_up, curve.states_up, curve.gaps_up);
    pass(false, curve.n_down, curve.states_down, curve.gaps_down);

    const double max_gaps = num.max_gap_fraction * static_cast<double>(n);
    if (curve.gaps_up > max_gaps || curve.gaps_down > max_gaps) {
        throw SweepError("run_sweep: pass exceeded the tolerated gap fraction (" +
                         std::to_string(curve.gaps_up) + " up, " +
                         std::to_string(curve.gaps_down) + " down, of " +
                         std::to_string(n) + " points)");
    }

    curve.jumps_up = detect_jumps(curve.axis, curve.n_up, num);
    curve.jumps_down = detect_jumps(curve.axis, curve.n_down, num);
    extract_regions(curve, num);
    return curve;
}

HysteresisCurve run_sweep(const PhysicalParams& params, const SweepSpec& spec,
                          const Numerics& num) {
    return run_sweep(params, spec, std::span<const double>{}, num);
}

double hysteresis_width(const HysteresisCurve& curve) { return curve.width; }

namespace {

std::vector<double> linspace(double start, double stop, int points) {
    std::vector<double> v(points);
    for (int i = 0; i < points; ++i) {
        v[i] = start + (stop - start) * static_cast<double>(i) /
                           static_cast<double>(std::max(points - 1, 1));
    }
    return v;
}

PhysicalParams apply_grid_value(const PhysicalParams& base, GridParameter parameter,
                                double value) {
    PhysicalParams p = base;
    switch (parameter) {
        case GridParameter::epsilon: p.epsilon = value; break;
        case GridParameter::delta_p: p.delta_p = value; break;
        case GridParameter::omega_c: p.omega_c = value; break;
    }
    return p;
}

bool clashes(GridParameter grid, SweepParameter swept) {
    switch (grid) {
        case GridParameter::epsilon: return swept == SweepParameter::epsilon_sq;
        case GridParameter::delta_p: return swept == SweepParameter::delta_p;
        case GridParameter::omega_c: return swept == SweepParameter::omega_c;
    }
    return false;
}

}  // namespace

GridScanResult grid_scan(const PhysicalParams& params, const SweepSpec& spec,
                         const GridAxisSpec& axis1, const GridAxisSpec& axis2,
                         const Numerics& num, int jobs) {
    spec.validate();
    if (axis1.points < 1 || axis2.points < 1) {
        throw std::invalid_argument("grid_scan: both grids must be nonempty");
    }
    if (axis1.parameter == axis2.parameter) {
        throw std::invalid_argument("grid_scan: grid axes must differ");
    }
    if (clashes(axis1.parameter, spec.parameter) || clashes(axis2.parameter, spec.parameter)) {
        throw std::invalid_argument("grid_scan: grid axis collides with the swept parameter");
    }

    GridScanResult result;
    result.axis1 = axis1;
    result.axis2 = axis2;
    result.values1 = linspace(axis1.start, axis1.stop, axis1.points);
    result.values2 = linspace(axis2.start, axis2.stop, axis2.points);
    const std::size_t n1 = result.values1.size();
    const std::size_t n2 = result.values2.size();
    result.widths.assign(n1 * n2, kNaN);

    parallel_for(n1 * n2, jobs, [&](std::size_t cell) {
        const std::size_t i = cell / n2;
        const std::size_t j = cell % n2;
        PhysicalParams p = apply_grid_value(params, axis1.parameter, result.values1[i]);
        p = apply_grid_value(p, axis2.parameter, result.values2[j]);
        try {
            result.widths[cell] = run_sweep(p, spec, num).width;
        } catch (const SweepError&) {
            // cell stays missing
        }
    });

    for (double w : result.widths) {
        if (std::isnan(w)) ++result.missing;
    }
    return result;
}

ThresholdResult threshold_scan(const PhysicalParams& base, const SweepSpec& spec,
                               std::span<const double> c_values, double width_floor,
                               const Numerics& num, int jobs) {
    spec.validate();
    if (!std::is_sorted(c_values.begin(), c_values.end())) {
        throw std::invalid_argument("threshold_scan: c_values must be sorted ascending");
    }
    for (double c : c_values) {
        if (c < 0.0) throw std::invalid_argument("threshold_scan: c_values must be >= 0");
    }

    ThresholdResult result;
    result.width_floor = width_floor > 0.0 ? width_floor : 2.0 * spec.grid_step();
    result.entries.resize(c_values.size());

    parallel_for(c_values.size(), jobs, [&](std::size_t i) {
        ThresholdEntry entry;
        entry.cooperativity = c_values[i];
        PhysicalParams p = base;
        p.g = c_values[i] > 0.0 ? cooperativity_to_g(c_values[i], base) : 0.0;
        try {
            entry.width = run_sweep(p, spec, num).width;
            entry.ok = true;
        } catch (const SweepError&) {
            entry.width = kNaN;
        }
        result.entries[i] = entry;
    });

    result.threshold_c = kNaN;
    for (const ThresholdEntry& e : result.entries) {
        if (e.ok && e.width > result.width_floor) {
            result.threshold_c = e.cooperativity;
            break;
        }
    }
    return result;
}

}  // namespace obsim
