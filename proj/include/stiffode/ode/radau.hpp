#pragma once

#include "stiffode/ode/solvers.hpp"

namespace stiffode::ode {

struct RadauOptions {
    bool store_trajectory = true;
    bool store_derivatives = true;
    double dt_min_factor = 1e-14;
    double initial_dt = 0.0;
    int max_newton_iter = 7;
    /// Refresh the Jacobian when the Newton convergence rate exceeds this.
    double jac_refresh_rate = 0.5;
};

/// 3-stage Radau IIA (order 5) with simplified Newton iterations on the
/// eigenvalue-decoupled stage system (one real and one complex-pair solve
/// per iteration; each factorization refresh counts n_lu += 2). The
/// embedded third-order estimate combines dt*f(t0,u0) with the stage
/// increments and is smoothed by the real iteration matrix.
SolveResult radau_solve(const Rhs& f, const Jacobian& jac, const Vec& u0,
                        double t0, double tf, const Tolerance& tol,
                        const RadauOptions& opts = {});

}  // namespace stiffode::ode
