#pragma once

#include "stiffode/ode/tableau.hpp"
#include "stiffode/ode/trajectory.hpp"

#include <functional>
#include <stdexcept>

namespace stiffode::ode {

using Rhs = std::function<Vec(double, const Vec&)>;
using Jacobian = std::function<Mat(double, const Vec&)>;

/// Raised when a stage evaluation turns non-finite; carries the stage index.
struct StepFailure : std::runtime_error {
    int stage;
    explicit StepFailure(int stage_);
};

struct RkStepResult {
    Vec u1;
    std::optional<Vec> u1_star;
};

/// One explicit Runge-Kutta step. Evaluates all `s` stages (exactly `s`
/// calls of `f`); computes the embedded solution when b* is present.
RkStepResult rk_step(const ButcherTableau& tableau, const Rhs& f, double t0,
                     const Vec& u0, double dt);

/// Scaled RMS error of the embedded pair:
/// eps = sqrt(mean_i ((u1_i - u1*_i)/delta_i)^2),
/// delta_i = atol + rtol * max(|u1_i|, |u0_i|).
double error_norm(const Vec& u0, const Vec& u1, const Vec& u1_star,
                  const Tolerance& tol);

/// dt_new = dt * min(10, max(0.1, (1/eps)^(1/(q+1)))); the factor saturates
/// at 10 when eps == 0.
double next_step_size(double dt, double eps, int q);

struct SolveOptions {
    bool store_trajectory = true;
    bool store_derivatives = true;
    /// dt underflow threshold as a fraction of (tf - t0).
    double dt_min_factor = 1e-14;
    /// Adaptive solvers pick the initial step automatically unless set.
    double initial_dt = 0.0;
};

/// Fixed-step explicit solve; the final step is shortened to land exactly
/// on tf. With store_derivatives the k1 stage of every step is kept and one
/// extra evaluation supplies the final sample's derivative.
SolveResult solve_fixed(const Rhs& f, const Vec& u0, double t0, double tf,
                        double dt, const ButcherTableau& tableau,
                        const SolveOptions& opts = {});

/// Embedded adaptive explicit solve. Every accepted step satisfies
/// error_norm <= 1; rejected steps retry with the next_step_size update.
SolveResult solve_adaptive(const Rhs& f, const Vec& u0, double t0, double tf,
                           const Tolerance& tol, const ButcherTableau& tableau,
                           const SolveOptions& opts = {});

/// Standard two-evaluation starting-step heuristic (adds the evaluations it
/// performs to n_fev through the caller's accounting).
double initial_step_size(const Rhs& f, double t0, const Vec& u0, const Vec& f0,
                         double tf, const Tolerance& tol, int error_order,
                         SolveStats& stats);

}  // namespace stiffode::ode
