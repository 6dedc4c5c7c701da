#pragma once

#include "stiffode/dataset/reparam.hpp"
#include "stiffode/neural/mlp.hpp"
#include "stiffode/ode/solvers.hpp"
#include "stiffode/problems/problems.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stiffode::rom {

using neural::Mlp;
using ode::Mat;
using ode::Vec;

/// Deployable surrogate: dynamics network (u_hat || mu_hat -> normalized
/// ts-dynamics), time network (u_hat || mu_hat -> log of normalized dt/dts),
/// and the owning problem's normalizers.
struct RomModel {
    Mlp dynamics;
    Mlp time_net;
    std::string problem_id;
    /// Rollout horizon in units of the training reparametrized window [0,1].
    double ts_horizon = 1.0;
    double fixed_dts = 1.0 / 160.0;
    double adaptive_tol = 2e-4;

    const problems::ParametricProblem& problem() const;
};

void save_rom(const RomModel& rom, const std::string& dir);
RomModel load_rom(const std::string& dir);

/// Right-hand side of the surrogate ODE in normalized state space.
ode::Rhs make_neural_rhs(const Mlp& dynamics,
                         const problems::ParametricProblem& prob,
                         const Vec& mu);

struct SolverChoice {
    bool fixed = true;
    double dts = 1.0 / 160.0;
    ode::Tolerance tol{2e-4, 2e-4};
};

struct InferResult {
    std::vector<double> ts;    // uniform grid
    Mat states_hat;            // N_u x (n+1), normalized
    std::vector<double> t;     // recovered physical time
    Mat states;                // N_u x (n+1), de-normalized
    ode::SolveStats stats;     // dynamics-network evaluations only
    ode::SolveStatus status = ode::SolveStatus::success;
    bool reached_final_time = true;
};

/// Roll the surrogate from u0(mu) over [0, ts_horizon], recover physical
/// time by cumulative Simpson integration of the de-normalized time map,
/// de-normalize the states. Time-network evaluations do not count into
/// n_fev. Adaptive rollouts are re-sampled onto the fixed dts grid for time
/// recovery.
InferResult infer(const RomModel& rom, const Vec& mu,
                  const SolverChoice& solver);

/// Cumulative-Simpson time recovery over a uniform ts grid (>= 3 points).
/// `states_hat` columns are the normalized rollout states.
std::vector<double> recover_time(const Mat& states_hat, const Mlp& time_net,
                                 const problems::ParametricProblem& prob,
                                 const Vec& mu, double dts);

}  // namespace stiffode::rom
