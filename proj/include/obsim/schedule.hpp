#ifndef OBSIM_SCHEDULE_HPP
#define OBSIM_SCHEDULE_HPP

#include <span>
#include <string>

#include "obsim/model.hpp"

namespace obsim {

enum class ScheduleTarget { delta_p, omega_c, epsilon };

// The relation between sigma and the pulse FWHM. The primary convention is
// sigma = sqrt(2 ln 2) * FWHM; "standard" selects the usual Gaussian
// relation sigma = FWHM / (2 sqrt(2 ln 2)).
enum class SigmaConvention { primary, standard };

// A Gaussian excursion of one parameter:
//   p(t) = base + amplitude * exp(-(t - center)^2 / (2 sigma^2)).
struct Schedule {
    ScheduleTarget target = ScheduleTarget::delta_p;
    double base = 0.0;
    double amplitude = 0.0;
    double center = 0.0;
    double fwhm = 1.0;
    SigmaConvention sigma_convention = SigmaConvention::primary;

    double sigma() const;
    double value_at(double t) const;

    void validate() const;  // throws std::invalid_argument
};

// Base params with every schedule evaluated at time t. At most one schedule
// per target; each schedule's base must match the corresponding parameter.
PhysicalParams params_at(const PhysicalParams& base, std::span<const Schedule> schedules,
                         double t);

std::string to_string(ScheduleTarget target);
std::string to_string(SigmaConvention convention);

}  // namespace obsim

#endif
