#include "obsim/schedule.hpp"

#include <cmath>
#include <stdexcept>

namespace obsim {

namespace {
const double kSqrt2Ln2 = std::sqrt(2.0 * std::log(2.0));
}

double Schedule::sigma() const {
    if (sigma_convention == SigmaConvention::primary) return kSqrt2Ln2 * fwhm;
    return fwhm / (2.0 * kSqrt2Ln2);
}

double Schedule::value_at(double t) const {
    const double s = sigma();
    const double u = (t - center) / s;
    return base + amplitude * std::exp(-0.5 * u * u);
}

void Schedule::validate() const {
    if (!(fwhm > 0.0)) throw std::invalid_argument("Schedule: fwhm must be > 0");
    if (!std::isfinite(base) || !std::isfinite(amplitude) || !std::isfinite(center)) {
        throw std::invalid_argument("Schedule: base, amplitude and center must be finite");
    }
}

PhysicalParams params_at(const PhysicalParams& base, std::span<const Schedule> schedules,
                         double t) {
    PhysicalParams p = base;
    for (const Schedule& sch : schedules) {
        const double v = sch.value_at(t);
        switch (sch.target) {
            case ScheduleTarget::delta_p: p.delta_p = v; break;
            case ScheduleTarget::omega_c: p.omega_c = v; break;
            case ScheduleTarget::epsilon: p.epsilon = v; break;
        }
    }
    return p;
}

std::string to_string(ScheduleTarget target) {
    switch (target) {
        case ScheduleTarget::delta_p: return "delta_p";
        case ScheduleTarget::omega_c: return "omega_c";
        case ScheduleTarget::epsilon: return "epsilon";
    }
    return "?";
}

std::string to_string(SigmaConvention convention) {
    return convention == SigmaConvention::primary ? "primary" : "standard";
}

}  // namespace obsim
