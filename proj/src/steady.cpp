#include "obsim/steady.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "obsim/integrate.hpp"

namespace obsim {

namespace {

using Matrix10 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Vector10 = Eigen::Matrix<double, kStateDim, 1>;

Vector10 to_eigen(const StateVec& v) {
    Vector10 out;
    for (int i = 0; i < kStateDim; ++i) out(i) = v[i];
    return out;
}

Matrix10 numerical_jacobian(const StateVec& x, const PhysicalParams& params,
                            const Numerics& num) {
    Matrix10 jac;
    StateVec xp = x;
    for (int j = 0; j < kStateDim; ++j) {
        const double h = num.jacobian_step * (1.0 + std::abs(x[j]));
        xp[j] = x[j] + h;
        const StateVec fp = reduced_rhs(xp, params);
        xp[j] = x[j] - h;
        const StateVec fm = reduced_rhs(xp, params);
        xp[j] = x[j];
        for (int i = 0; i < kStateDim; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    return jac;
}

// Decoupled sublevels (e.g. omega_c = gamma32 = 0) leave an identically zero
// equation row; pin the matching unknown so the LU stays regular and the
// conserved component keeps its warm-start value.
void pin_zero_rows(Matrix10& jac, Vector10& f) {
    for (int i = 0; i < kStateDim; ++i) {
        if (jac.row(i).cwiseAbs().maxCoeff() < 1e-12 && std::abs(f(i)) < 1e-12) {
            jac.row(i).setZero();
            jac(i, i) = 1.0;
            f(i) = 0.0;
        }
    }
}

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::stable: return "stable";
        case Stability::unstable: return "unstable";
        case Stability::marginal: return "marginal";
    }
    return "?";
}

std::vector<std::complex<double>> linearization_spectrum(const SemiclassicalState& point,
                                                         const PhysicalParams& params,
                                                         const Numerics& num) {
    const Matrix10 jac = numerical_jacobian(pack_state(point), params, num);
    Eigen::EigenSolver<Matrix10> solver(jac, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> ev(kStateDim);
    for (int i = 0; i < kStateDim; ++i) ev[i] = solver.eigenvalues()(i);
    std::sort(ev.begin(), ev.end(), [](const auto& a, const auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return ev;
}

SteadyPoint solve_steady(const PhysicalParams& params, const SemiclassicalState& guess,
                         const Numerics& num) {
    params.validate();

    StateVec x = pack_state(guess);
    StateVec f = reduced_rhs(x, params);
    double fnorm = max_norm(f);

    SteadyPoint point;
    int iter = 0;
    for (; iter < num.newton_max_iter && fnorm > num.newton_tol; ++iter) {
        Matrix10 jac = numerical_jacobian(x, params, num);
        Vector10 rhs = -to_eigen(f);
        pin_zero_rows(jac, rhs);

        Vector10 step = jac.partialPivLu().solve(rhs);
        if (!step.allFinite()) {
            // singular beyond partial pivoting; retry with a small Tikhonov shift
            const double mu = 1e-10 * std::max(1.0, jac.cwiseAbs().maxCoeff());
            const Matrix10 jtj = jac.transpose() * jac + mu * Matrix10::Identity();
            step = jtj.ldlt().solve(jac.transpose() * rhs);
            if (!step.allFinite()) {
                point.state = unpack_state(x);
                point.residual = fnorm;
                point.iterations = iter;
                point.message = "singular Jacobian beyond damping recovery";
                return point;
            }
        }

        // backtracking line search on the residual max-norm
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k <= num.newton_max_backtrack; ++k) {
            StateVec x_try;
            for (int i = 0; i < kStateDim; ++i) x_try[i] = x[i] + lambda * step(i);
            const StateVec f_try = reduced_rhs(x_try, params);
            const double fn_try = max_norm(f_try);
            if (std::isfinite(fn_try) && fn_try < fnorm) {
                x = x_try;
                f = f_try;
                fnorm = fn_try;
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) {
            point.state = unpack_state(x);
            point.residual = fnorm;
            point.iterations = iter;
            point.message = "line search stalled before reaching tolerance";
            return point;
        }
    }

    point.state = unpack_state(x);
    point.residual = fnorm;
    point.iterations = iter;
    if (fnorm > num.newton_tol) {
        point.message = "no convergence within max iterations";
        return point;
    }

    point.converged = true;
    if (params.n_atoms == 0) {
        // no atomic medium: the physical system is the cavity alone, whose
        // linearization is [[-kappa, -delta_p], [delta_p, -kappa]]
        point.leading_rate = -params.kappa;
    } else {
        const auto spectrum = linearization_spectrum(point.state, params, num);
        point.leading_rate = spectrum.front().real();
    }
    if (point.leading_rate < -num.stability_margin) {
        point.stability = Stability::stable;
    } else if (point.leading_rate > num.stability_margin) {
        point.stability = Stability::unstable;
    } else {
        point.stability = Stability::marginal;
    }
    return point;
}

Complex empty_cavity_alpha(const PhysicalParams& params) {
    return params.epsilon / Complex{params.delta_p, params.kappa};
}

std::vector<SteadyPoint> find_all_branches(const PhysicalParams& params,
                                           std::span<const SemiclassicalState> seeds,
                                           const Numerics& num) {
    std::vector<SemiclassicalState> all_seeds;
    all_seeds.push_back(cold_start_state());
    SemiclassicalState filled = cold_start_state();
    filled.alpha = empty_cavity_alpha(params);
    all_seeds.push_back(filled);
    all_seeds.insert(all_seeds.end(), seeds.begin(), seeds.end());

    std::vector<SteadyPoint> roots;
    const auto try_seed = [&](const SemiclassicalState& seed) {
        const SteadyPoint p = solve_steady(params, seed, num);
        if (!p.converged) return;
        for (const SteadyPoint& r : roots) {
            if (state_distance(r.state, p.state) < num.dedup_tol) return;
        }
        roots.push_back(p);
    };

    for (const SemiclassicalState& seed : all_seeds) try_seed(seed);

    std::sort(roots.begin(), roots.end(), [](const SteadyPoint& a, const SteadyPoint& b) {
        return photon_number(a.state) < photon_number(b.state);
    });

    // An interior saddle sits on the basin boundary between two attracting
    // roots. Bisect the straight segment between them on "which root does a
    // short integration approach", then shoot Newton from samples of the
    // near-boundary trajectory, which passes close to the saddle.
    const std::size_t n_outer = roots.size();
    for (std::size_t i = 0; i + 1 < n_outer; ++i) {
        if (roots[i].stability == Stability::unstable ||
            roots[i + 1].stability == Stability::unstable) {
            continue;
        }
        const StateVec lo = pack_state(roots[i].state);
        const StateVec hi = pack_state(roots[i + 1].state);
        const double n_lo = photon_number(roots[i].state);
        const double n_hi = photon_number(roots[i + 1].state);

        const auto interpolate = [&](double w) {
            StateVec mid;
            for (int k = 0; k < kStateDim; ++k) mid[k] = (1.0 - w) * lo[k] + w * hi[k];
            return unpack_state(mid);
        };
        const auto lands_high = [&](double w) {
            Numerics coarse = num;
            coarse.steady_tol = 1e-5;
            coarse.steady_t_max = 500.0;
            try {
                const SteadyResult r = evolve_to_steady(interpolate(w), params, coarse);
                const double n = photon_number(r.state);
                return std::abs(n - n_hi) < std::abs(n - n_lo);
            } catch (const IntegrationError&) {
                return false;
            }
        };

        double w_lo = 0.0, w_hi = 1.0;
        if (lands_high(w_lo) || !lands_high(w_hi)) continue;
        for (int it = 0; it < 30; ++it) {
            const double w = 0.5 * (w_lo + w_hi);
            (lands_high(w) ? w_hi : w_lo) = w;
        }

        try {
            Numerics slide = num;
            slide.population_guard = 1e-3;
            const Trajectory traj =
                evolve(interpolate(w_lo), params, {}, 60.0, 10.0, slide);
            for (const SemiclassicalState& s : traj.states) try_seed(s);
        } catch (const IntegrationError&) {
            // boundary shot failed; outer roots stand
        }
    }

    std::sort(roots.begin(), roots.end(), [](const SteadyPoint& a, const SteadyPoint& b) {
        return photon_number(a.state) < photon_number(b.state);
    });
    return roots;
}

}  // namespace obsim
