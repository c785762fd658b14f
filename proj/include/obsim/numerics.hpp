#ifndef OBSIM_NUMERICS_HPP
#define OBSIM_NUMERICS_HPP

namespace obsim {

// Every tolerance and threshold used by the solvers, in one place so a run
// manifest can record them all. Values are in units of kappa (rates),
// 1/kappa (times) or dimensionless as noted.
struct Numerics {
    // adaptive integrator
    double rtol = 1e-9;
    double atol = 1e-12;
    double max_step = 2.5;
    double population_guard = 1e-6;  // allowed excursion of populations off [0,1]

    // evolve_to_steady: residual < steady_tol*(1+|y|) sustained over steady_window
    double steady_tol = 1e-8;
    double steady_window = 10.0;
    double steady_t_max = 1e4;

    // damped Newton root solve
    double newton_tol = 1e-10;
    int newton_max_iter = 200;
    int newton_max_backtrack = 30;
    double jacobian_step = 1e-7;     // central-difference step scale
    double stability_margin = 1e-6;  // |leading rate| below this is marginal
    double dedup_tol = 1e-6;         // root identity threshold, state max-norm

    // hysteresis sweeps
    double gap_threshold = 1e-2;      // relative <n> gap declaring branch disagreement
    double jump_median_factor = 5.0;  // jump if |dn| > factor * median |dn|
    double jump_rel_change = 0.25;    // ... and relative change exceeds this
    double max_gap_fraction = 0.05;   // tolerated fraction of unconverged points

    // fluctuation detectors
    double latch_threshold = 0.5;  // relative branch change declaring a latch
    double latch_floor = 1e-6;     // photon floor avoiding 0/0 on dark branches
    double detect_window = 20.0;   // pre/post averaging window length
};

}  // namespace obsim

#endif
