#ifndef OBSIM_DETECT_HPP
#define OBSIM_DETECT_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "obsim/integrate.hpp"
#include "obsim/model.hpp"
#include "obsim/numerics.hpp"
#include "obsim/schedule.hpp"
#include "obsim/sweep.hpp"

namespace obsim {

enum class Branch { upper, lower };
std::string to_string(Branch b);

class BranchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PreparedBranch {
    SemiclassicalState state;   // steady state on the requested branch at the target
    HysteresisCurve curve;      // preparation sweep with the target inserted
    BistableRegion region;      // bistable interval containing the target
    double target = 0.0;        // axis value
    Branch branch = Branch::upper;
};

// Steady state at `target` on the requested branch, obtained by warm-start
// sweeping from the direction that populates that branch. Throws BranchError
// when the target is not strictly inside a bistable region (naming the
// nearest one) or when the branch state is not a stable root.
PreparedBranch prepare_on_branch(const PhysicalParams& params, const SweepSpec& spec,
                                 double target, Branch branch, const Numerics& num = {});

struct DetectorSpec {
    PhysicalParams params;   // base configuration; the scheduled parameter sits at base
    Schedule schedule;       // the fluctuation pulse
    SweepSpec prep_sweep;    // hysteresis sweep used for preparation
    Branch branch = Branch::upper;
    double t_end = 0.0;      // <= 0 selects center + max(10 sigma, 100/kappa)
    double sample_dt = 0.1;
};

struct DetectorRun {
    DetectorSpec spec;
    PreparedBranch preparation;
    Trajectory trajectory;
    double n_before = 0.0;  // <n> averaged over the pre-pulse window
    double n_after = 0.0;   // <n> averaged over the post-pulse window
    bool latched = false;
};

// Prepares the branch, evolves through the pulse, and reports whether the
// transmission latched onto the other branch.
DetectorRun run_detector(const DetectorSpec& spec, const Numerics& num = {});

struct SpeedLimitEntry {
    double fwhm = 0.0;
    bool latched = false;
    double n_before = 0.0;
    double n_after = 0.0;
};

struct SpeedLimitResult {
    std::vector<SpeedLimitEntry> entries;
    double smallest_latching_fwhm = 0.0;  // NaN when no probed width latches
};

// Repeats the detector across pulse widths (sorted ascending). The branch
// preparation is shared; the pulse runs execute concurrently on `jobs`
// workers.
SpeedLimitResult speed_limit_scan(const DetectorSpec& spec,
                                  std::span<const double> fwhm_values,
                                  const Numerics& num = {}, int jobs = 1);

}  // namespace obsim

#endif
