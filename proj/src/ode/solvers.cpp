#include "stiffode/ode/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace stiffode::ode {

StepFailure::StepFailure(int stage_)
    : std::runtime_error("non-finite value in Runge-Kutta stage " +
                         std::to_string(stage_)),
      stage(stage_) {}

namespace {

bool finite(const Vec& v) { return v.allFinite(); }

double scaled_rms(const Vec& v, const Vec& scale) {
    const Eigen::Index n = v.size();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const double r = v(i) / scale(i);
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(n));
}

Vec error_scale(const Vec& u0, const Vec& u1, const Tolerance& tol) {
    return (tol.atol +
            tol.rtol * u0.cwiseAbs().cwiseMax(u1.cwiseAbs()).array())
        .matrix();
}

/// True for pairs whose last stage re-evaluates f at (t+dt, u1), e.g.
/// Dormand-Prince: the last a-row equals b and c_s = 1, so the stage can be
/// reused as the next step's first stage.
bool is_fsal(const ButcherTableau& t) {
    const int s = t.stages;
    if (t.c(s - 1) != 1.0 || t.b(s - 1) != 0.0) return false;
    for (int j = 0; j < s; ++j)
        if (t.a(s - 1, j) != t.b(j)) return false;
    return true;
}

}  // namespace

RkStepResult rk_step(const ButcherTableau& tableau, const Rhs& f, double t0,
                     const Vec& u0, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("rk_step: dt must be positive");
    if (!tableau.is_explicit())
        throw std::invalid_argument("rk_step: explicit tableau required");
    const int s = tableau.stages;
    std::vector<Vec> k(s);
    for (int i = 0; i < s; ++i) {
        Vec arg = u0;
        for (int j = 0; j < i; ++j)
            if (tableau.a(i, j) != 0.0) arg += dt * tableau.a(i, j) * k[j];
        k[i] = f(t0 + tableau.c(i) * dt, arg);
        if (!finite(k[i])) throw StepFailure(i);
    }
    RkStepResult res;
    res.u1 = u0;
    for (int i = 0; i < s; ++i)
        if (tableau.b(i) != 0.0) res.u1 += dt * tableau.b(i) * k[i];
    if (tableau.b_star) {
        Vec us = u0;
        for (int i = 0; i < s; ++i)
            if ((*tableau.b_star)(i) != 0.0) us += dt * (*tableau.b_star)(i)*k[i];
        res.u1_star = std::move(us);
    }
    return res;
}

double error_norm(const Vec& u0, const Vec& u1, const Vec& u1_star,
                  const Tolerance& tol) {
    if (u0.size() != u1.size() || u1.size() != u1_star.size())
        throw std::invalid_argument("error_norm: dimension mismatch");
    if (!finite(u0) || !finite(u1) || !finite(u1_star))
        throw std::domain_error("error_norm: non-finite input state");
    return scaled_rms(u1 - u1_star, error_scale(u0, u1, tol));
}

double next_step_size(double dt, double eps, int q) {
    if (!(dt > 0.0)) throw std::invalid_argument("next_step_size: dt must be positive");
    double factor = 10.0;
    if (eps > 0.0)
        factor = std::min(10.0, std::max(0.1, std::pow(1.0 / eps, 1.0 / (q + 1))));
    return dt * factor;
}

double initial_step_size(const Rhs& f, double t0, const Vec& u0, const Vec& f0,
                         double tf, const Tolerance& tol, int error_order,
                         SolveStats& stats) {
    const Vec sc = error_scale(u0, u0, tol);
    const double d0 = scaled_rms(u0, sc);
    const double d1 = scaled_rms(f0, sc);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, tf - t0);
    const Vec u1 = u0 + h0 * f0;
    const Vec f1 = f(t0 + h0, u1);
    stats.n_fev += 1;
    const double d2 = scaled_rms(f1 - f0, sc) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / std::max(d1, d2), 1.0 / (error_order + 1));
    return std::min({100.0 * h0, h1, tf - t0});
}

SolveResult solve_fixed(const Rhs& f, const Vec& u0, double t0, double tf,
                        double dt, const ButcherTableau& tableau,
                        const SolveOptions& opts) {
    if (!(tf > t0)) throw std::invalid_argument("solve_fixed: tf must exceed t0");
    if (!(dt > 0.0)) throw std::invalid_argument("solve_fixed: dt must be positive");
    tableau.validate();
    if (!tableau.is_explicit())
        throw std::invalid_argument("solve_fixed: explicit tableau required");

    SolveResult res;
    auto record = [&](double t, const Vec& u) {
        if (!opts.store_trajectory) return;
        res.trajectory.times.push_back(t);
        res.trajectory.states.push_back(u);
    };

    Vec u = u0;
    double t = t0;
    record(t, u);
    res.last_valid_time = t;

    const double span = tf - t0;
    const auto n_steps = static_cast<std::int64_t>(
        std::ceil(span / dt - 1e-12));
    for (std::int64_t step = 0; step < n_steps; ++step) {
        double t_next = t0 + (step + 1) * dt;
        double h = dt;
        if (step == n_steps - 1 || t_next > tf) {
            t_next = tf;
            h = tf - t;
        }
        try {
            if (opts.store_derivatives && opts.store_trajectory) {
                // Stage 1 doubles as the stored derivative (c_1 = 0).
                const Vec d = f(t, u);
                res.stats.n_fev += 1;
                res.trajectory.derivatives.push_back(d);
                const int s = tableau.stages;
                std::vector<Vec> k(s);
                k[0] = d;
                for (int i = 1; i < s; ++i) {
                    Vec arg = u;
                    for (int j = 0; j < i; ++j)
                        if (tableau.a(i, j) != 0.0) arg += h * tableau.a(i, j) * k[j];
                    k[i] = f(t + tableau.c(i) * h, arg);
                    res.stats.n_fev += 1;
                    if (!finite(k[i])) throw StepFailure(i);
                }
                Vec u1 = u;
                for (int i = 0; i < s; ++i)
                    if (tableau.b(i) != 0.0) u1 += h * tableau.b(i) * k[i];
                u = std::move(u1);
            } else {
                auto out = rk_step(tableau, f, t, u, h);
                res.stats.n_fev += tableau.stages;
                u = std::move(out.u1);
            }
        } catch (const StepFailure& e) {
            res.status = SolveStatus::nonfinite_state;
            res.message = e.what();
            return res;
        }
        if (!finite(u)) {
            res.status = SolveStatus::nonfinite_state;
            res.message = "state turned non-finite";
            return res;
        }
        t = t_next;
        record(t, u);
        res.last_valid_time = t;
        res.stats.n_steps_accepted += 1;
    }
    if (opts.store_derivatives && opts.store_trajectory) {
        res.trajectory.derivatives.push_back(f(tf, u));
        res.stats.n_fev += 1;
    }
    return res;
}

SolveResult solve_adaptive(const Rhs& f, const Vec& u0, double t0, double tf,
                           const Tolerance& tol, const ButcherTableau& tableau,
                           const SolveOptions& opts) {
    if (!(tf > t0)) throw std::invalid_argument("solve_adaptive: tf must exceed t0");
    tableau.validate();
    if (!tableau.b_star)
        throw std::invalid_argument("solve_adaptive: tableau has no embedded weights");
    if (!tableau.is_explicit())
        throw std::invalid_argument("solve_adaptive: explicit tableau required");

    const int s = tableau.stages;
    const int q = tableau.error_order;
    const bool fsal = is_fsal(tableau);
    const double dt_min = opts.dt_min_factor * (tf - t0);

    SolveResult res;
    auto record = [&](double t, const Vec& u, const Vec* deriv) {
        if (!opts.store_trajectory) return;
        res.trajectory.times.push_back(t);
        res.trajectory.states.push_back(u);
        if (opts.store_derivatives && deriv != nullptr)
            res.trajectory.derivatives.push_back(*deriv);
    };

    Vec u = u0;
    double t = t0;
    Vec k1 = f(t, u);
    res.stats.n_fev += 1;
    record(t, u, &k1);
    res.last_valid_time = t;

    double dt = opts.initial_dt > 0.0
                    ? opts.initial_dt
                    : initial_step_size(f, t0, u0, k1, tf, tol, q, res.stats);

    std::vector<Vec> k(s);
    while (t < tf) {
        dt = std::max(dt, dt_min);
        const double h = std::min(dt, tf - t);

        k[0] = k1;
        bool stage_failed = false;
        for (int i = 1; i < s; ++i) {
            Vec arg = u;
            for (int j = 0; j < i; ++j)
                if (tableau.a(i, j) != 0.0) arg += h * tableau.a(i, j) * k[j];
            k[i] = f(t + tableau.c(i) * h, arg);
            res.stats.n_fev += 1;
            if (!finite(k[i])) {
                stage_failed = true;
                break;
            }
        }

        double eps = std::numeric_limits<double>::infinity();
        Vec u1;
        if (!stage_failed) {
            u1 = u;
            for (int i = 0; i < s; ++i)
                if (tableau.b(i) != 0.0) u1 += h * tableau.b(i) * k[i];
            Vec u1s = u;
            for (int i = 0; i < s; ++i)
                if ((*tableau.b_star)(i) != 0.0) u1s += h * (*tableau.b_star)(i)*k[i];
            if (finite(u1) && finite(u1s))
                eps = error_norm(u, u1, u1s, tol);
        }

        if (eps <= 1.0) {
            t += h;
            u = std::move(u1);
            if (fsal) {
                k1 = k[s - 1];
            } else {
                k1 = f(t, u);
                res.stats.n_fev += 1;
            }
            record(t, u, &k1);
            res.last_valid_time = t;
            res.stats.n_steps_accepted += 1;
            dt = next_step_size(h, eps, q);
        } else {
            res.stats.n_steps_rejected += 1;
            dt = next_step_size(h, eps, q);
            if (dt < dt_min) {
                res.status = SolveStatus::step_underflow;
                res.message =
                    "step size underflow (stiffness suspected) at t = " +
                    std::to_string(t);
                return res;
            }
        }
    }
    return res;
}

}  // namespace stiffode::ode
