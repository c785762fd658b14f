#include "obsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace obsim {

namespace {
constexpr Complex kI{0.0, 1.0};

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument("PhysicalParams: " + what);
}
}  // namespace

double PhysicalParams::cooperativity() const {
    return static_cast<double>(n_atoms) * g * g / (2.0 * kappa * gamma3_total());
}

void PhysicalParams::validate() const {
    require(kappa > 0.0, "kappa must be > 0");
    require(gamma31 >= 0.0 && gamma32 >= 0.0, "polarization decay rates must be >= 0");
    require(deph2 >= 0.0 && deph3 >= 0.0, "dephasing rates must be >= 0");
    require(n_atoms >= 0, "n_atoms must be >= 0");
    require(g >= 0.0, "g must be >= 0");
    require(omega_c >= 0.0, "omega_c must be >= 0");
    require(epsilon >= 0.0, "epsilon must be >= 0");
    if (n_atoms > 0) {
        require(gamma3_total() > 0.0, "gamma31 + gamma32 must be > 0 when n_atoms > 0");
    }
    for (double v : {kappa, gamma31, gamma32, deph2, deph3, g, omega_c, epsilon,
                     delta_p, delta1, delta2}) {
        require(std::isfinite(v), "all parameters must be finite");
    }
}

double cooperativity_to_g(double cooperativity, const PhysicalParams& params) {
    if (cooperativity < 0.0) {
        throw std::invalid_argument("cooperativity must be >= 0");
    }
    if (params.n_atoms <= 0 || params.gamma3_total() <= 0.0) {
        throw std::invalid_argument(
            "cooperativity requires n_atoms > 0 and gamma31 + gamma32 > 0");
    }
    return std::sqrt(2.0 * cooperativity * params.kappa * params.gamma3_total() /
                     static_cast<double>(params.n_atoms));
}

SemiclassicalState cold_start_state() {
    SemiclassicalState s;
    s.s11 = 1.0;
    return s;
}

double photon_number(const SemiclassicalState& state) { return std::norm(state.alpha); }

double transmission_norm(const SemiclassicalState& state, const PhysicalParams& params) {
    const double drive = params.epsilon / params.kappa;
    return std::norm(state.alpha) / (drive * drive);
}

SemiclassicalState bloch_rhs(const SemiclassicalState& s, const PhysicalParams& p) {
    const double gamma3 = p.gamma3_total();
    const double coll = p.g * static_cast<double>(p.n_atoms);

    SemiclassicalState d;
    d.alpha = kI * (Complex{p.delta_p, p.kappa} * s.alpha) - kI * p.epsilon -
              kI * coll * s.s13;
    d.s13 = kI * (Complex{p.delta_p - p.delta1, gamma3 + p.deph3} * s.s13) -
            kI * p.omega_c * s.s12 + kI * p.g * s.alpha * (s.s33 - s.s11);
    d.s12 = kI * (Complex{p.delta_p + p.delta2 - p.delta1, p.deph2} * s.s12) -
            kI * p.omega_c * s.s13 + kI * p.g * s.alpha * std::conj(s.s23);
    d.s23 = kI * (Complex{-p.delta2, gamma3 + p.deph2 + p.deph3} * s.s23) -
            kI * p.g * s.alpha * std::conj(s.s12) + kI * p.omega_c * (s.s33 - s.s22);
    const double d11 = 2.0 * p.g * std::imag(std::conj(s.alpha) * s.s13) +
                       2.0 * p.gamma31 * s.s33;
    const double d22 = 2.0 * p.omega_c * std::imag(s.s23) + 2.0 * p.gamma32 * s.s33;
    d.s11 = d11;
    d.s22 = d22;
    d.s33 = -(d11 + d22);
    return d;
}

StateVec pack_state(const SemiclassicalState& s) {
    return {s.alpha.real(), s.alpha.imag(), s.s13.real(), s.s13.imag(),
            s.s12.real(),   s.s12.imag(),   s.s23.real(), s.s23.imag(),
            s.s11,          s.s22};
}

SemiclassicalState unpack_state(const StateVec& v) {
    SemiclassicalState s;
    s.alpha = {v[0], v[1]};
    s.s13 = {v[2], v[3]};
    s.s12 = {v[4], v[5]};
    s.s23 = {v[6], v[7]};
    s.s11 = v[8];
    s.s22 = v[9];
    s.s33 = 1.0 - v[8] - v[9];
    return s;
}

StateVec reduced_rhs(const StateVec& v, const PhysicalParams& p) {
    const SemiclassicalState d = bloch_rhs(unpack_state(v), p);
    return {d.alpha.real(), d.alpha.imag(), d.s13.real(), d.s13.imag(),
            d.s12.real(),   d.s12.imag(),   d.s23.real(), d.s23.imag(),
            d.s11,          d.s22};
}

double max_norm(const StateVec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double state_distance(const SemiclassicalState& a, const SemiclassicalState& b) {
    const StateVec va = pack_state(a);
    const StateVec vb = pack_state(b);
    double m = 0.0;
    for (int i = 0; i < kStateDim; ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

}  // namespace obsim
