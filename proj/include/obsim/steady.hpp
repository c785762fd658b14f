#ifndef OBSIM_STEADY_HPP
#define OBSIM_STEADY_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "obsim/model.hpp"
#include "obsim/numerics.hpp"

namespace obsim {

enum class Stability { stable, unstable, marginal };
std::string to_string(Stability s);

struct SteadyPoint {
    SemiclassicalState state;
    double residual = 0.0;      // max-norm of the reduced RHS at the state
    Stability stability = Stability::marginal;
    double leading_rate = 0.0;  // largest real part of the linearization spectrum
    bool converged = false;
    int iterations = 0;
    std::string message;        // failure diagnostic when !converged
};

// Damped Newton iteration on the 10 reduced unknowns with a central-difference
// Jacobian. On success the returned point carries residual <= newton_tol and
// a stability classification from the linearization at the root.
SteadyPoint solve_steady(const PhysicalParams& params, const SemiclassicalState& guess,
                         const Numerics& num = {});

// Multi-start root search: runs solve_steady from the cold-start state, the
// empty-cavity field state with ground atoms, every caller seed, and
// mid-branch interpolants between distinct roots. Deduplicates to dedup_tol
// in state max-norm; returns distinct converged roots sorted by <n>.
std::vector<SteadyPoint> find_all_branches(const PhysicalParams& params,
                                           std::span<const SemiclassicalState> seeds,
                                           const Numerics& num = {});

// Eigenvalues of the 10x10 real Jacobian of the reduced equations of motion
// at the given point (conjugate-paired up to numerical tolerance).
std::vector<std::complex<double>> linearization_spectrum(const SemiclassicalState& point,
                                                         const PhysicalParams& params,
                                                         const Numerics& num = {});

// Steady cavity amplitude of the atom-free (or uncoupled) cavity.
Complex empty_cavity_alpha(const PhysicalParams& params);

}  // namespace obsim

#endif
