#ifndef OBSIM_INTEGRATE_HPP
#define OBSIM_INTEGRATE_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "obsim/model.hpp"
#include "obsim/numerics.hpp"
#include "obsim/schedule.hpp"

namespace obsim {

// Hard integration failure (step-size underflow, invariant breach). Carries
// the last time that was still integrated successfully.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double last_good_time)
        : std::runtime_error(what), last_good_time_(last_good_time) {}
    double last_good_time() const { return last_good_time_; }

private:
    double last_good_time_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<SemiclassicalState> states;
    std::vector<double> photon_numbers;
    std::vector<double> transmissions;  // <n> / (epsilon(t)/kappa)^2

    std::size_t size() const { return times.size(); }
};

// Integrates the equations of motion from t = 0 to t_end, sampling every
// sample_dt (plus the exact endpoint). Schedules modulate at most one
// parameter each and are evaluated at the integrator's internal times.
Trajectory evolve(const SemiclassicalState& initial, const PhysicalParams& params,
                  std::span<const Schedule> schedules, double t_end, double sample_dt,
                  const Numerics& num = {});

struct SteadyResult {
    SemiclassicalState state;
    bool converged = false;
    double time = 0.0;      // integration time reached
    double residual = 0.0;  // max-norm of the reduced RHS at the returned state
};

// Integrates with constant parameters until ||dy/dt|| < steady_tol*(1+||y||)
// has held over a trailing window of steady_window, or steady_t_max is
// reached (converged = false, never throws for plain non-convergence).
SteadyResult evolve_to_steady(const SemiclassicalState& initial,
                              const PhysicalParams& params, const Numerics& num = {});

}  // namespace obsim

#endif
