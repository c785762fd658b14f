#ifndef OBSIM_MODEL_HPP
#define OBSIM_MODEL_HPP

#include <array>
#include <complex>
#include <cstdint>

namespace obsim {

using Complex = std::complex<double>;

// One system configuration. All rates and frequencies are in units of the
// cavity field decay rate kappa, which is fixed to 1 internally; times are
// in units of 1/kappa. The pump strength epsilon, the coupling g and the
// control Rabi half-amplitude omega_c are real and nonnegative (drive and
// coupling phases are gauged away).
struct PhysicalParams {
    double kappa = 1.0;
    double gamma31 = 0.5;   // polarization decay |3> -> |1>
    double gamma32 = 0.5;   // polarization decay |3> -> |2>
    double deph2 = 0.0;     // pure dephasing of |2>
    double deph3 = 0.0;     // pure dephasing of |3>
    double g = 0.0;         // atom-cavity coupling
    std::int64_t n_atoms = 0;
    double omega_c = 0.0;   // control-field Rabi half-amplitude
    double epsilon = 0.0;   // cavity pump strength
    double delta_p = 0.0;   // probe-cavity detuning
    double delta1 = 0.0;    // atom-cavity detuning
    double delta2 = 0.0;    // atom-control detuning

    double gamma3_total() const { return gamma31 + gamma32; }
    double cooperativity() const;

    // Throws std::invalid_argument on any violated invariant.
    void validate() const;
};

// Inverts C = N g^2 / (2 kappa Gamma3) for g. Requires n_atoms > 0 and
// gamma3_total > 0; throws std::invalid_argument otherwise.
double cooperativity_to_g(double cooperativity, const PhysicalParams& params);

// The 7 semiclassical expectation values in per-atom form: alpha is the
// cavity field amplitude, s_ij = <S_ij>/N. Populations satisfy
// s11 + s22 + s33 = 1 on the physical simplex.
struct SemiclassicalState {
    Complex alpha{0.0, 0.0};
    Complex s13{0.0, 0.0};
    Complex s12{0.0, 0.0};
    Complex s23{0.0, 0.0};
    double s11 = 0.0;
    double s22 = 0.0;
    double s33 = 0.0;

    double photon_number() const { return std::norm(alpha); }
};

// All atoms in |1>, empty cavity.
SemiclassicalState cold_start_state();

// Derived observables.
double photon_number(const SemiclassicalState& state);
// |alpha|^2 / (epsilon/kappa)^2; only meaningful for epsilon > 0.
double transmission_norm(const SemiclassicalState& state, const PhysicalParams& params);

// Time derivative of all 7 components of the semiclassical equations of
// motion. The cavity equation carries the collective coupling g*N*s13; the
// atomic equations are written directly in the per-atom variables. The s33
// component is minus the sum of the s11 and s22 components, exactly.
SemiclassicalState bloch_rhs(const SemiclassicalState& state, const PhysicalParams& params);

// Reduced real coordinates used by the integrator and the root solver:
// [Re a, Im a, Re s13, Im s13, Re s12, Im s12, Re s23, Im s23, s11, s22],
// with s33 = 1 - s11 - s22 eliminated.
constexpr int kStateDim = 10;
using StateVec = std::array<double, kStateDim>;

StateVec pack_state(const SemiclassicalState& state);
SemiclassicalState unpack_state(const StateVec& v);
StateVec reduced_rhs(const StateVec& v, const PhysicalParams& params);

double max_norm(const StateVec& v);
double state_distance(const SemiclassicalState& a, const SemiclassicalState& b);

}  // namespace obsim

#endif
