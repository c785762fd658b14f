// Acceptance suite: one pass/fail line per criterion, exit code = number of
// failed criteria. Each criterion states its tolerances inline; supporting
// measurements are printed so a failure carries its own evidence.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "obsim/detect.hpp"
#include "obsim/experiments.hpp"
#include "obsim/integrate.hpp"
#include "obsim/io.hpp"
#include "obsim/steady.hpp"
#include "obsim/sweep.hpp"
#include "oracle_two_level.hpp"

using namespace obsim;

namespace {

struct Criterion {
    int number;
    std::string name;
    bool pass = true;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

PhysicalParams three_level(double cooperativity, std::int64_t n_atoms, double omega_c,
                           double epsilon, double delta_p) {
    PhysicalParams p;
    p.gamma31 = 0.5;
    p.gamma32 = 0.5;
    p.n_atoms = n_atoms;
    p.omega_c = omega_c;
    p.epsilon = epsilon;
    p.delta_p = delta_p;
    p.g = cooperativity_to_g(cooperativity, p);
    return p;
}

Numerics tight_numerics() {
    Numerics num;
    num.steady_tol = 1e-9;
    num.rtol = 1e-10;
    num.atol = 1e-13;
    return num;
}

// --- criterion 1: empty-cavity Lorentzian ---------------------------------

Criterion criterion_1() {
    Criterion c{1, "empty-cavity Lorentzian, 101-point detuning grid, rel err <= 1e-8"};
    const auto t0 = std::chrono::steady_clock::now();
    PhysicalParams p;
    p.n_atoms = 0;
    p.epsilon = 2.0;
    double worst = 0.0;
    for (int i = 0; i <= 100; ++i) {
        p.delta_p = -3.0 + 6.0 * i / 100.0;
        const SteadyResult r = evolve_to_steady(cold_start_state(), p);
        c.require(r.converged, "steady state at delta_p = " + fmt(p.delta_p));
        const double expected = 4.0 / (p.delta_p * p.delta_p + 1.0);
        worst = std::max(worst, std::abs(photon_number(r.state) - expected) / expected);
    }
    const double dt = seconds_since(t0);
    c.note("max relative error " + fmt(worst) + ", " + fmt(dt) + " s");
    c.require(worst <= 1e-8, "relative error exceeds 1e-8");
    c.require(dt < 1.0, "runtime exceeds 1 s");
    return c;
}

// --- criterion 2: two-level closed form and C > 4 threshold ----------------

Criterion criterion_2() {
    Criterion c{2, "two-level closed-form state equation and the C > 4 threshold"};
    const auto t0 = std::chrono::steady_clock::now();

    // every root found satisfies the closed-form state equation to 1e-6
    double worst_eq = 0.0;
    for (double coop : {4.5, 6.0, 8.0}) {
        const PhysicalParams base = oracle::two_level_params(coop, 0.0);
        const oracle::Folds folds = oracle::folds(base);
        const double window = folds.pump_sq_up_jump - folds.pump_sq_down_jump;
        for (double f : {-0.5, 0.25, 0.5, 0.75, 1.5}) {
            PhysicalParams p = base;
            const double pump_sq = folds.pump_sq_down_jump + f * window;
            p.epsilon = std::sqrt(pump_sq);
            const auto roots = find_all_branches(p, {});
            const auto expected = oracle::photon_roots(pump_sq, p);
            c.require(roots.size() == expected.size(),
                      "root count at C = " + fmt(coop) + ", pump^2 = " + fmt(pump_sq) +
                          " (" + fmt(static_cast<double>(roots.size())) + " vs oracle " +
                          fmt(static_cast<double>(expected.size())) + ")");
            for (const SteadyPoint& root : roots) {
                const double eq = std::abs(oracle::pump_sq_of_n(photon_number(root.state), p) -
                                           pump_sq) /
                                  pump_sq;
                worst_eq = std::max(worst_eq, eq);
            }
        }
    }
    c.note("worst state-equation residual " + fmt(worst_eq));
    c.require(worst_eq <= 1e-6, "state-equation residual exceeds 1e-6");

    // sweep-detected bistability above the threshold only; turning points match
    SweepSpec spec{SweepParameter::epsilon_sq, 600.0, 1500.0, 226, SweepMode::newton};
    const double step = spec.grid_step();
    for (double coop : {1.0, 2.0, 3.5}) {
        const HysteresisCurve curve =
            run_sweep(oracle::two_level_params(coop, 0.0), spec);
        c.require(curve.width == 0.0, "unexpected bistability at C = " + fmt(coop));
    }
    for (double coop : {4.5, 6.0, 8.0}) {
        const PhysicalParams p = oracle::two_level_params(coop, 0.0);
        const HysteresisCurve curve = run_sweep(p, spec);
        c.require(curve.width > 0.0, "no bistability at C = " + fmt(coop));
        if (curve.regions.empty()) continue;
        const oracle::Folds folds = oracle::folds(p);
        const BistableRegion& r = curve.regions.front();
        c.require(std::abs(r.lo - folds.pump_sq_down_jump) <= 2.0 * step,
                  "lower turning point off by more than 2 grid steps at C = " + fmt(coop));
        c.require(std::abs(r.hi - folds.pump_sq_up_jump) <= 2.0 * step,
                  "upper turning point off by more than 2 grid steps at C = " + fmt(coop));
        c.note("C = " + fmt(coop) + ": region [" + fmt(r.lo) + ", " + fmt(r.hi) +
               "] vs closed form [" + fmt(folds.pump_sq_down_jump) + ", " +
               fmt(folds.pump_sq_up_jump) + "]");
    }

    const double dt = seconds_since(t0);
    c.note(fmt(dt) + " s");
    c.require(dt < 60.0, "runtime exceeds 1 min");
    return c;
}

// --- criterion 3: EIT transparency -----------------------------------------

Criterion criterion_3() {
    Criterion c{3, "EIT transparency at two-photon resonance (both solver routes)"};
    const Numerics tight = tight_numerics();
    for (double omega_c : {0.1, 0.3, 1.0}) {
        const PhysicalParams p = three_level(8.0, 1000, omega_c, 2.0, 0.0);

        const SteadyResult integrated = evolve_to_steady(cold_start_state(), p, tight);
        c.require(integrated.converged, "integration converged at omega_c = " + fmt(omega_c));
        const double trans_i = transmission_norm(integrated.state, p);
        c.require(std::abs(trans_i - 1.0) <= 1e-6,
                  "integrated transmission at omega_c = " + fmt(omega_c) + " is " +
                      fmt(trans_i));
        c.require(integrated.state.s33 < 1e-6,
                  "integrated s33 at omega_c = " + fmt(omega_c));

        const SteadyPoint root = solve_steady(p, cold_start_state());
        c.require(root.converged, "root solve converged at omega_c = " + fmt(omega_c));
        const double trans_n = transmission_norm(root.state, p);
        c.require(std::abs(trans_n - 1.0) <= 1e-6,
                  "root transmission at omega_c = " + fmt(omega_c) + " is " + fmt(trans_n));
        c.require(root.state.s33 < 1e-6, "root s33 at omega_c = " + fmt(omega_c));
    }

    const PhysicalParams p = three_level(8.0, 1000, 0.3, 2.0, 0.0);
    const HysteresisCurve curve =
        run_sweep(p, SweepSpec{SweepParameter::omega_c, 0.05, 1.0, 96, SweepMode::newton});
    c.note("omega_c-sweep width at delta_p = 0: " + fmt(curve.width));
    c.require(curve.width == 0.0, "nonzero hysteresis width on resonance");
    return c;
}

// --- criterion 4: detuning-sweep regime classification ---------------------

Criterion criterion_4() {
    Criterion c{4, "detuning-sweep regimes: none / EIT-side / EIT plus normal-mode side"};
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSpec spec{SweepParameter::delta_p, -6.0, 6.0, 481, SweepMode::newton};
    const auto regions_for = [&](double omega_c) {
        return run_sweep(three_level(8.0, 1000, omega_c, 14.5, 0.0), spec).regions;
    };
    const auto overlaps_center = [](const BistableRegion& r) {
        return r.lo < 1.0 && r.hi > -1.0;
    };

    const auto none = regions_for(1.5);
    c.note("omega_c = 1.5: " + fmt(static_cast<double>(none.size())) + " regions");
    c.require(none.empty(), "expected zero bistable regions at omega_c = 1.5");

    const auto eit_only = regions_for(0.5);
    c.note("omega_c = 0.5: " + fmt(static_cast<double>(eit_only.size())) + " regions");
    bool center = false;
    for (const BistableRegion& r : eit_only) center = center || overlaps_center(r);
    c.require(!eit_only.empty() && center,
              "expected a bistable region near delta_p = 0 at omega_c = 0.5");

    const auto both = regions_for(0.35);
    std::string desc = "omega_c = 0.35:";
    int center_count = 0, outer_count = 0;
    for (const BistableRegion& r : both) {
        desc += " [" + fmt(r.lo) + ", " + fmt(r.hi) + "]";
        if (overlaps_center(r)) {
            ++center_count;
        } else {
            ++outer_count;
        }
    }
    c.note(desc);
    c.require(both.size() >= 2, "expected at least two disjoint regions at omega_c = 0.35");
    c.require(center_count >= 1, "expected an EIT-side region at omega_c = 0.35");
    c.require(outer_count >= 1, "expected a normal-mode-side region at omega_c = 0.35");

    const double dt = seconds_since(t0);
    c.note(fmt(dt) + " s");
    c.require(dt < 600.0, "runtime exceeds 10 min");
    return c;
}

// --- criterion 5: hysteresis width grows with cooperativity ----------------

Criterion criterion_5() {
    Criterion c{5, "pump-sweep hysteresis width nondecreasing over C = 4, 5, 6, 7"};
    const SweepSpec spec{SweepParameter::epsilon_sq, 5.0, 205.0, 201, SweepMode::newton};
    double previous = -1.0;
    std::string widths = "widths:";
    for (double coop : {4.0, 5.0, 6.0, 7.0}) {
        const double w = run_sweep(three_level(coop, 1000, 0.3, 0.0, 0.1), spec).width;
        widths += " " + fmt(w);
        c.require(w >= previous, "width decreased at C = " + fmt(coop));
        previous = w;
    }
    c.note(widths);
    c.require(previous > 0.0, "no bistability detected at C = 7");
    return c;
}

// --- criterion 6: sub-4 cooperativity bistability --------------------------

Criterion criterion_6() {
    Criterion c{6, "control-sweep bistability at C = 1.75, N = 1e4, delta_p = 0.05"};
    const auto t0 = std::chrono::steady_clock::now();
    const SweepSpec spec{SweepParameter::omega_c, 0.002, 0.5, 2001, SweepMode::newton};
    double best_width = 0.0, best_eps = 0.0;
    for (double eps = 5.0; eps <= 25.0; eps += 1.0) {
        const PhysicalParams p = three_level(1.75, 10000, 0.0, eps, 0.05);
        try {
            const double w = run_sweep(p, spec).width;
            if (w > best_width) {
                best_width = w;
                best_eps = eps;
            }
        } catch (const SweepError& e) {
            c.note(std::string("sweep failed at eps = ") + fmt(eps) + ": " + e.what());
        }
    }
    c.note("largest width " + fmt(best_width) + (best_width > 0 ? " at eps = " + fmt(best_eps) : ""));
    c.note("(exact steady-state structure is monostable here; smallest bistable "
           "cooperativity measured in this family is ~2.0, e.g. width 0.002 at "
           "C = 2.0, eps = 8, delta_p = 0.1, N = 1e3)");
    c.require(best_width > 0.0, "no pump strength in [5, 25] shows bistability at C = 1.75");
    const double dt = seconds_since(t0);
    c.note(fmt(dt) + " s");
    c.require(dt < 1800.0, "runtime exceeds 30 min");
    return c;
}

// --- criterion 7: fluctuation detectors ------------------------------------

struct DetectorOutcome {
    DetectorRun run;
    double seconds = 0.0;
};

DetectorOutcome run_one(DetectorSpec spec, double fwhm) {
    const auto t0 = std::chrono::steady_clock::now();
    spec.schedule.fwhm = fwhm;
    DetectorOutcome out{run_detector(spec), 0.0};
    out.seconds = seconds_since(t0);
    return out;
}

double max_pointwise_gap(const Trajectory& a, const Trajectory& b) {
    double worst = 0.0;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        const double gap = std::abs(a.photon_numbers[i] - b.photon_numbers[i]) /
                           std::max({a.photon_numbers[i], b.photon_numbers[i], 1e-6});
        worst = std::max(worst, gap);
    }
    return worst;
}

Criterion criterion_7() {
    Criterion c{7, "fluctuation detectors at the reference operating points"};

    // detuning-fluctuation detector
    DetectorSpec fig7;
    fig7.params = three_level(2.7, 1000, 0.2, 5.0, 0.039);
    fig7.schedule.target = ScheduleTarget::delta_p;
    fig7.schedule.base = 0.039;
    fig7.schedule.amplitude = 2.5e-2 * 0.039;
    fig7.schedule.center = 300.0;
    fig7.prep_sweep = {SweepParameter::delta_p, 0.0, 0.08, 161, SweepMode::newton};
    fig7.branch = Branch::upper;
    fig7.sample_dt = 0.1;

    const DetectorOutcome f7_wide = run_one(fig7, 0.2);
    const DetectorOutcome f7_narrow = run_one(fig7, 0.1);
    c.note("detuning detector, FWHM 0.2: n " + fmt(f7_wide.run.n_before) + " -> " +
           fmt(f7_wide.run.n_after) + ", latched = " + (f7_wide.run.latched ? "yes" : "no") +
           ", " + fmt(f7_wide.seconds) + " s");
    c.require(f7_wide.run.latched, "detuning detector did not latch at FWHM = 0.2 "
              "(the pulse peak clears the branch fold at delta_p = 0.03983 by only 15% "
              "of its amplitude; escape there needs the excursion held for ~1e3 kappa t, "
              "so no pulse of this width can latch)");
    const double rel_change =
        std::abs(f7_wide.run.n_after - f7_wide.run.n_before) /
        std::max({f7_wide.run.n_before, f7_wide.run.n_after, 1e-6});
    c.require(rel_change > 0.5, "post-pulse branch change is " + fmt(rel_change));

    DetectorSpec fig7_null = fig7;
    fig7_null.schedule.amplitude = 0.0;
    const DetectorOutcome f7_ctl = run_one(fig7_null, 0.2);
    c.require(!f7_ctl.run.latched, "amplitude-0 control latched");

    const double f7_gap = max_pointwise_gap(f7_wide.run.trajectory, f7_narrow.run.trajectory);
    c.note("FWHM 0.1 vs 0.2 max pointwise gap " + fmt(f7_gap));
    c.require(f7_gap > 0.1, "the two pulse widths are not distinguishable (> 0.1)");
    c.require(f7_wide.seconds < 300.0 && f7_narrow.seconds < 300.0,
              "detuning detector run exceeded 5 min");

    // control-intensity-fluctuation detector
    DetectorSpec fig8;
    fig8.params = three_level(2.7, 1000, 0.251, 10.0, 0.2);
    fig8.schedule.target = ScheduleTarget::omega_c;
    fig8.schedule.base = 0.251;
    fig8.schedule.amplitude = 0.01 * 0.251;
    fig8.schedule.center = 150.0;
    fig8.prep_sweep = {SweepParameter::omega_c, 0.15, 0.35, 201, SweepMode::newton};
    fig8.branch = Branch::upper;
    fig8.sample_dt = 0.1;

    const DetectorOutcome f8_wide = run_one(fig8, 0.1);
    const DetectorOutcome f8_narrow = run_one(fig8, 0.01);
    c.note("control detector, FWHM 0.1: n " + fmt(f8_wide.run.n_before) + " -> " +
           fmt(f8_wide.run.n_after) + ", latched = " + (f8_wide.run.latched ? "yes" : "no") +
           ", " + fmt(f8_wide.seconds) + " s");
    c.require(f8_wide.run.latched, "control detector did not latch at FWHM = 0.1 "
              "(the 1% excursion reaches omega_c = 0.2535, short of the branch fold at "
              "0.2687, so no pulse of any width can latch at these values)");

    DetectorSpec fig8_null = fig8;
    fig8_null.schedule.amplitude = 0.0;
    const DetectorOutcome f8_ctl = run_one(fig8_null, 0.1);
    c.require(!f8_ctl.run.latched, "amplitude-0 control latched");

    const double f8_gap = max_pointwise_gap(f8_wide.run.trajectory, f8_narrow.run.trajectory);
    c.note("FWHM 0.01 vs 0.1 max pointwise gap " + fmt(f8_gap));
    c.require(f8_gap > 0.1, "the two pulse widths are not distinguishable (> 0.1)");
    c.require(f8_wide.seconds < 300.0 && f8_narrow.seconds < 300.0,
              "control detector run exceeded 5 min");
    return c;
}

// --- criterion 8: solver cross-validation on random configurations ---------

Criterion criterion_8() {
    Criterion c{8, "Newton roots vs long-time integration on 50 random configurations"};
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937 rng(987123);  // documented seed
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    Numerics tight = tight_numerics();
    tight.steady_t_max = 3e4;

    int stable_roots = 0;
    double worst_agreement = 0.0;
    double worst_drift = 0.0;
    for (int sample = 0; sample < 50; ++sample) {
        PhysicalParams p;
        p.gamma31 = 0.1 + 0.9 * uni(rng);
        p.gamma32 = 0.1 + 0.9 * uni(rng);
        p.deph2 = 0.01 + 0.09 * uni(rng);
        p.deph3 = 0.1 * uni(rng);
        p.n_atoms = 100 + static_cast<std::int64_t>(1900 * uni(rng));
        p.omega_c = 0.05 + 1.15 * uni(rng);
        p.epsilon = 0.5 + 11.5 * uni(rng);
        p.delta_p = -3.0 + 6.0 * uni(rng);
        p.delta1 = -0.5 + uni(rng);
        p.delta2 = -0.5 + uni(rng);
        p.g = cooperativity_to_g(0.5 + 7.5 * uni(rng), p);

        const auto roots = find_all_branches(p, {});
        for (const SteadyPoint& root : roots) {
            if (root.stability != Stability::stable) continue;
            ++stable_roots;
            // physically valid 1e-3 perturbation: mix with the maximally
            // mixed atomic state and shift the field
            SemiclassicalState perturbed = root.state;
            const double lam = 1e-3;
            perturbed.alpha += Complex{lam, lam};
            perturbed.s13 *= 1.0 - lam;
            perturbed.s12 *= 1.0 - lam;
            perturbed.s23 *= 1.0 - lam;
            perturbed.s11 = (1.0 - lam) * perturbed.s11 + lam / 3.0;
            perturbed.s22 = (1.0 - lam) * perturbed.s22 + lam / 3.0;
            perturbed.s33 = 1.0 - perturbed.s11 - perturbed.s22;

            const SteadyResult back = evolve_to_steady(perturbed, p, tight);
            c.require(back.converged, "integration back to the root converged (sample " +
                                          fmt(sample) + ")");
            if (!back.converged) continue;
            const double d = state_distance(back.state, root.state);
            worst_agreement = std::max(worst_agreement, d);
            if (d > 1e-6) {
                c.require(false, "sample " + fmt(sample) + ": distance " + fmt(d) +
                                     " exceeds 1e-6");
            }

            const Trajectory traj = evolve(perturbed, p, {}, 50.0, 0.5, tight);
            for (const SemiclassicalState& s : traj.states) {
                worst_drift =
                    std::max(worst_drift, std::abs(s.s11 + s.s22 + s.s33 - 1.0));
            }
        }
    }
    const double dt = seconds_since(t0);
    c.note(fmt(static_cast<double>(stable_roots)) + " stable roots, worst agreement " +
           fmt(worst_agreement) + ", worst population-sum drift " + fmt(worst_drift) +
           ", " + fmt(dt) + " s");
    c.require(stable_roots >= 50, "expected at least one stable root per sample");
    c.require(worst_drift <= 1e-9, "population-sum drift exceeds 1e-9");
    return c;
}

// --- criterion 9: manifest round-trip determinism ---------------------------

Criterion criterion_9() {
    Criterion c{9, "re-running from a manifest reproduces bit-identical CSV output"};
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "obsim_acceptance_9";
    fs::remove_all(dir);

    const std::string base = R"({
      "physical": { "gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000,
                    "cooperativity": 6.0, "omega_c": 0.3, "epsilon": 0.0, "delta_p": 0.1 },
      "experiment": {
        "type": "sweep",
        "sweep": { "parameter": "epsilon_sq", "start": 5.0, "stop": 205.0, "points": 101 }
      },
      "output": { "dir": ")" + (dir / "a").string() + R"(", "stem": "run" }
    })";
    ExperimentConfig config = parse_config(base);
    c.require(run_experiment(config).exit_code == 0, "first sweep run");

    ExperimentConfig again = config_from_manifest(read_file(dir / "a" / "run_manifest.json"));
    again.output.dir = (dir / "b").string();
    c.require(run_experiment(again).exit_code == 0, "re-run from manifest");
    c.require(read_file(dir / "a" / "run_curve.csv") == read_file(dir / "b" / "run_curve.csv"),
              "curve CSV is not bit-identical");
    c.require(read_file(dir / "a" / "run_regions.csv") ==
                  read_file(dir / "b" / "run_regions.csv"),
              "regions CSV is not bit-identical");

    // a threaded grid is deterministic and reproduces the serial result
    const std::string grid_text = R"({
      "physical": { "gamma31": 0.5, "gamma32": 0.5, "n_atoms": 1000,
                    "cooperativity": 5.0, "omega_c": 0.3, "epsilon": 5.0, "delta_p": 0.1 },
      "experiment": {
        "type": "grid",
        "sweep": { "parameter": "omega_c", "start": 0.02, "stop": 0.5, "points": 49 },
        "axis1": { "parameter": "epsilon", "start": 4.0, "stop": 8.0, "points": 3 },
        "axis2": { "parameter": "delta_p", "start": 0.05, "stop": 0.15, "points": 3 }
      },
      "jobs": 4,
      "output": { "dir": ")" + (dir / "g1").string() + R"(", "stem": "grid" }
    })";
    ExperimentConfig grid_config = parse_config(grid_text);
    c.require(run_experiment(grid_config).exit_code == 0, "threaded grid run");
    ExperimentConfig serial =
        config_from_manifest(read_file(dir / "g1" / "grid_manifest.json"));
    serial.jobs = 1;
    serial.output.dir = (dir / "g2").string();
    c.require(run_experiment(serial).exit_code == 0, "serial grid run");
    c.require(read_file(dir / "g1" / "grid_grid.csv") ==
                  read_file(dir / "g2" / "grid_grid.csv"),
              "grid CSV differs between jobs = 4 and jobs = 1");
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    const auto selected = [&](int n) {
        if (wanted.empty()) return true;
        for (int w : wanted) {
            if (w == n) return true;
        }
        return false;
    };

    using Runner = Criterion (*)();
    const Runner runners[] = {criterion_1, criterion_2, criterion_3, criterion_4,
                              criterion_5, criterion_6, criterion_7, criterion_8,
                              criterion_9};
    int failures = 0;
    for (int i = 0; i < 9; ++i) {
        if (!selected(i + 1)) continue;
        Criterion c = [&] {
            try {
                return runners[i]();
            } catch (const std::exception& e) {
                Criterion crashed{i + 1, "criterion aborted"};
                crashed.pass = false;
                crashed.notes.push_back(std::string("exception: ") + e.what());
                return crashed;
            }
        }();
        std::printf("[%s] criterion %d: %s\n", c.pass ? "PASS" : "FAIL", c.number,
                    c.name.c_str());
        for (const std::string& note : c.notes) std::printf("       %s\n", note.c_str());
        std::fflush(stdout);
        if (!c.pass) ++failures;
    }
    return failures;
}
