#include "obsim/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace obsim {

namespace {

// Dormand-Prince 5(4) embedded pair, FSAL.
constexpr double kC2 = 1.0 / 5.0, kC3 = 3.0 / 10.0, kC4 = 4.0 / 5.0, kC5 = 8.0 / 9.0;
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0,
                 kA53 = 64448.0 / 6561.0, kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

StateVec axpy(const StateVec& y, double h,
              std::initializer_list<std::pair<double, const StateVec*>> terms) {
    StateVec out = y;
    for (const auto& [c, k] : terms) {
        for (int i = 0; i < kStateDim; ++i) out[i] += h * c * (*k)[i];
    }
    return out;
}

struct StepResult {
    StateVec y_new;
    StateVec k_new;  // f at (t+h, y_new), reusable as next k1
    double error;    // scaled RMS error estimate
};

template <typename ParamsOf>
StepResult dopri_step(const StateVec& y, const StateVec& k1, double t, double h,
                      const ParamsOf& params_of, const Numerics& num) {
    StateVec k2 = reduced_rhs(axpy(y, h, {{kA21, &k1}}), params_of(t + kC2 * h));
    StateVec k3 =
        reduced_rhs(axpy(y, h, {{kA31, &k1}, {kA32, &k2}}), params_of(t + kC3 * h));
    StateVec k4 = reduced_rhs(axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}),
                              params_of(t + kC4 * h));
    StateVec k5 =
        reduced_rhs(axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}),
                    params_of(t + kC5 * h));
    StateVec k6 = reduced_rhs(
        axpy(y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}),
        params_of(t + h));

    StepResult r;
    r.y_new = axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
    r.k_new = reduced_rhs(r.y_new, params_of(t + h));

    double err_sq = 0.0;
    for (int i = 0; i < kStateDim; ++i) {
        const double e = h * (kE1 * k1[i] + kE3 * k3[i] + kE4 * k4[i] + kE5 * k5[i] +
                              kE6 * k6[i] + kE7 * r.k_new[i]);
        const double scale =
            num.atol + num.rtol * std::max(std::abs(y[i]), std::abs(r.y_new[i]));
        err_sq += (e / scale) * (e / scale);
    }
    r.error = std::sqrt(err_sq / kStateDim);
    return r;
}

void check_populations(const StateVec& y, double t, const Numerics& num) {
    const double s33 = 1.0 - y[8] - y[9];
    for (double pop : {y[8], y[9], s33}) {
        if (!(pop >= -num.population_guard && pop <= 1.0 + num.population_guard)) {
            throw IntegrationError(
                "population left [0,1] by more than the guard at t = " +
                    std::to_string(t) + " (value " + std::to_string(pop) + ")",
                t);
        }
    }
    for (double v : y) {
        if (!std::isfinite(v)) {
            throw IntegrationError("non-finite state component at t = " + std::to_string(t),
                                   t);
        }
    }
}

// Step-size ceiling around the support of active pulses. The error estimate
// only sees the stage points, so a pulse narrower than the step would pass
// between them unnoticed; the ceiling keeps steps at sigma/2 inside a pulse
// window and stops free-running steps at its leading edge.
class StepCeiling {
public:
    StepCeiling(std::span<const Schedule> schedules, double max_step)
        : max_step_(max_step) {
        for (const Schedule& s : schedules) {
            if (s.amplitude == 0.0) continue;
            const double sig = s.sigma();
            windows_.push_back({s.center - 8.0 * sig, s.center + 8.0 * sig, 0.5 * sig});
        }
    }

    double at(double t) const {
        double cap = max_step_;
        for (const Window& w : windows_) {
            if (t < w.lo) {
                cap = std::min(cap, w.lo - t);
            } else if (t <= w.hi) {
                cap = std::min(cap, w.step);
            }
        }
        return std::max(cap, 1e-12);
    }

private:
    struct Window {
        double lo, hi, step;
    };
    std::vector<Window> windows_;
    double max_step_;
};

// Adaptive driver from t = 0 through the strictly increasing checkpoint
// list (the last entry is the end time). Steps never cross a checkpoint;
// on_sample fires at each checkpoint, on_accept after every accepted step
// and may return false to stop early.
template <typename ParamsOf, typename OnSample, typename OnAccept>
void drive(StateVec& y, std::span<const double> checkpoints, const ParamsOf& params_of,
           const StepCeiling& ceiling, const Numerics& num, const OnSample& on_sample,
           const OnAccept& on_accept) {
    double t = 0.0;
    StateVec k1 = reduced_rhs(y, params_of(t));
    std::size_t next_cp = 0;
    double h_opt = std::min(1e-3, num.max_step);

    while (next_cp < checkpoints.size()) {
        const double target = checkpoints[next_cp];
        if (t >= target) {
            on_sample(target, y);
            ++next_cp;
            continue;
        }
        double h = h_opt;
        const double cap = ceiling.at(t);
        const bool limited = h > cap;
        if (limited) h = cap;
        const bool clamped = t + h >= target;
        if (clamped) h = target - t;

        const StepResult r = dopri_step(y, k1, t, h, params_of, num);
        if (!std::isfinite(r.error) || r.error > 1.0) {
            const double shrink = std::isfinite(r.error)
                                      ? std::max(0.2, 0.9 * std::pow(r.error, -0.2))
                                      : 0.2;
            h_opt = h * shrink;
            if (h_opt < 1e-14 * std::max(1.0, std::abs(t))) {
                throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
            }
            continue;
        }

        y = r.y_new;
        k1 = r.k_new;
        t = clamped ? target : t + h;
        check_populations(y, t, num);
        if (!clamped && !limited) {
            const double grow =
                r.error > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(r.error, -0.2)))
                              : 5.0;
            h_opt = std::min(h * grow, num.max_step);
        }
        if (!on_accept(t, y, k1)) return;
    }
}

void validate_schedules(std::span<const Schedule> schedules, const PhysicalParams& params) {
    bool seen[3] = {false, false, false};
    for (const Schedule& s : schedules) {
        s.validate();
        const int idx = static_cast<int>(s.target);
        if (seen[idx]) {
            throw std::invalid_argument("evolve: more than one schedule for " +
                                        to_string(s.target));
        }
        seen[idx] = true;
        double base_param = 0.0;
        switch (s.target) {
            case ScheduleTarget::delta_p: base_param = params.delta_p; break;
            case ScheduleTarget::omega_c: base_param = params.omega_c; break;
            case ScheduleTarget::epsilon: base_param = params.epsilon; break;
        }
        if (s.base != base_param) {
            throw std::invalid_argument("evolve: schedule base for " + to_string(s.target) +
                                        " does not match the parameter value");
        }
    }
}

}  // namespace

Trajectory evolve(const SemiclassicalState& initial, const PhysicalParams& params,
                  std::span<const Schedule> schedules, double t_end, double sample_dt,
                  const Numerics& num) {
    params.validate();
    validate_schedules(schedules, params);
    if (!(t_end > 0.0)) throw std::invalid_argument("evolve: t_end must be > 0");
    if (!(sample_dt > 0.0)) throw std::invalid_argument("evolve: sample_dt must be > 0");

    std::vector<double> samples;
    samples.reserve(static_cast<std::size_t>(t_end / sample_dt) + 2);
    for (std::size_t i = 0;; ++i) {
        const double ti = static_cast<double>(i) * sample_dt;
        if (ti >= t_end * (1.0 - 1e-12)) break;
        samples.push_back(ti);
    }
    samples.push_back(t_end);

    const auto params_of = [&](double t) { return params_at(params, schedules, t); };

    Trajectory traj;
    traj.times.reserve(samples.size());
    traj.states.reserve(samples.size());
    const auto on_sample = [&](double t, const StateVec& y) {
        const SemiclassicalState s = unpack_state(y);
        traj.times.push_back(t);
        traj.states.push_back(s);
        traj.photon_numbers.push_back(photon_number(s));
        traj.transmissions.push_back(transmission_norm(s, params_of(t)));
    };

    StateVec y = pack_state(initial);
    const StepCeiling ceiling(schedules, num.max_step);
    drive(y, samples, params_of, ceiling, num, on_sample,
          [](double, const StateVec&, const StateVec&) { return true; });
    return traj;
}

SteadyResult evolve_to_steady(const SemiclassicalState& initial,
                              const PhysicalParams& params, const Numerics& num_in) {
    params.validate();
    // the per-step discretization noise sets a floor on the observable
    // residual; keep the integrator tolerance two decades below the
    // requested residual bound so the detection threshold stays reachable
    Numerics num = num_in;
    num.rtol = std::min(num_in.rtol, 1e-2 * num_in.steady_tol);
    num.atol = std::min(num_in.atol, 1e-3 * num.rtol);
    const auto params_of = [&](double) { return params; };

    StateVec y = pack_state(initial);
    SteadyResult result;
    // start of the ongoing stretch with the residual below threshold; NaN
    // while the condition does not hold
    double below_since = std::numeric_limits<double>::quiet_NaN();

    const auto residual_ok = [&](const StateVec& ynow, const StateVec& k) {
        return max_norm(k) < num.steady_tol * (1.0 + max_norm(ynow));
    };
    if (residual_ok(y, reduced_rhs(y, params))) below_since = 0.0;

    const auto on_accept = [&](double t, const StateVec& ynow, const StateVec& k) {
        if (residual_ok(ynow, k)) {
            if (std::isnan(below_since)) below_since = t;
            if (t - below_since >= num.steady_window) {
                result.converged = true;
                result.state = unpack_state(ynow);
                result.time = t;
                result.residual = max_norm(k);
                return false;
            }
        } else {
            below_since = std::numeric_limits<double>::quiet_NaN();
        }
        return true;
    };

    const std::array<double, 1> end_cp = {num.steady_t_max};
    const StepCeiling ceiling({}, num.max_step);
    drive(y, end_cp, params_of, ceiling, num, [](double, const StateVec&) {}, on_accept);

    if (!result.converged) {
        result.state = unpack_state(y);
        result.time = num.steady_t_max;
        result.residual = max_norm(reduced_rhs(y, params));
    }
    return result;
}

}  // namespace obsim
