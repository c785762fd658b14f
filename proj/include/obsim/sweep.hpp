#ifndef OBSIM_SWEEP_HPP
#define OBSIM_SWEEP_HPP

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "obsim/model.hpp"
#include "obsim/numerics.hpp"

namespace obsim {

// Swept axis: epsilon_sq is uniform in |epsilon/kappa|^2, the other two are
// uniform in the parameter itself.
enum class SweepParameter { epsilon_sq, delta_p, omega_c };
std::string to_string(SweepParameter p);

enum class SweepMode { integrate, newton };
std::string to_string(SweepMode m);

struct SweepSpec {
    SweepParameter parameter = SweepParameter::epsilon_sq;
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
    SweepMode mode = SweepMode::newton;

    void validate() const;  // throws std::invalid_argument
    double grid_step() const;
};

class SweepError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct BistableRegion {
    double lo = 0.0;
    double hi = 0.0;
    double width = 0.0;
};

struct HysteresisCurve {
    SweepParameter parameter = SweepParameter::epsilon_sq;
    std::vector<double> axis;                     // ascending
    std::vector<double> n_up, n_down;             // <n> per pass; NaN at gaps
    std::vector<SemiclassicalState> states_up, states_down;
    std::vector<double> jumps_up, jumps_down;     // detected jump locations
    std::vector<BistableRegion> regions;          // disjoint bistable intervals
    double width = 0.0;                           // max region width
    int gaps_up = 0, gaps_down = 0;
};

// Applies an axis value to a copy of the base parameters.
PhysicalParams apply_sweep_value(const PhysicalParams& base, SweepParameter parameter,
                                 double value);

// Warm-start up/down passes over the axis with jump detection and bistable
// region extraction. extra_points are inserted into the axis (used to land
// exactly on a preparation target). Throws SweepError when either pass has
// more than max_gap_fraction unconverged points.
HysteresisCurve run_sweep(const PhysicalParams& params, const SweepSpec& spec,
                          std::span<const double> extra_points, const Numerics& num = {});
HysteresisCurve run_sweep(const PhysicalParams& params, const SweepSpec& spec,
                          const Numerics& num = {});

// Max bistable-region width; 0 when none.
double hysteresis_width(const HysteresisCurve& curve);

// A grid axis over one of the non-swept parameters (epsilon in units of
// kappa, not squared).
enum class GridParameter { epsilon, delta_p, omega_c };
std::string to_string(GridParameter p);

struct GridAxisSpec {
    GridParameter parameter = GridParameter::epsilon;
    double start = 0.0;
    double stop = 1.0;
    int points = 2;
};

struct GridScanResult {
    GridAxisSpec axis1, axis2;
    std::vector<double> values1, values2;
    std::vector<double> widths;  // row-major [i1 * values2.size() + i2]; NaN = missing
    int missing = 0;

    bool acceptable(const Numerics& num) const {
        return missing <= num.max_gap_fraction * static_cast<double>(widths.size());
    }
};

// Hysteresis width per grid cell; cells whose sweep fails are NaN. Cells run
// concurrently on `jobs` workers with deterministic placement.
GridScanResult grid_scan(const PhysicalParams& params, const SweepSpec& spec,
                         const GridAxisSpec& axis1, const GridAxisSpec& axis2,
                         const Numerics& num = {}, int jobs = 1);

struct ThresholdEntry {
    double cooperativity = 0.0;
    double width = 0.0;
    bool ok = false;  // sweep completed
};

struct ThresholdResult {
    std::vector<ThresholdEntry> entries;
    double width_floor = 0.0;
    double threshold_c = 0.0;  // smallest C with width > floor; NaN if none
};

// Sets g from each cooperativity and measures the hysteresis width.
// width_floor <= 0 selects the default of two axis grid steps.
ThresholdResult threshold_scan(const PhysicalParams& base, const SweepSpec& spec,
                               std::span<const double> c_values, double width_floor = 0.0,
                               const Numerics& num = {}, int jobs = 1);

}  // namespace obsim

#endif
