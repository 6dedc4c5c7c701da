#include "stiffode/rom/rom.hpp"

#include "stiffode/ode/tableau.hpp"
#include "stiffode/util/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stiffode::rom {

const problems::ParametricProblem& RomModel::problem() const {
    return problems::get(problem_id);
}

void save_rom(const RomModel& rom, const std::string& dir) {
    neural::save_mlp_json(rom.dynamics, dir + "/dynamics.json");
    neural::save_mlp_json(rom.time_net, dir + "/time_net.json");
    nlohmann::json j;
    j["problem"] = rom.problem_id;
    j["ts_horizon"] = rom.ts_horizon;
    j["fixed_dts"] = rom.fixed_dts;
    j["adaptive_tol"] = rom.adaptive_tol;
    std::ofstream os(dir + "/rom.json");
    if (!os) throw std::runtime_error("cannot open " + dir + "/rom.json");
    os << j.dump(2) << "\n";
}

RomModel load_rom(const std::string& dir) {
    RomModel rom;
    rom.dynamics = neural::load_mlp_json(dir + "/dynamics.json");
    rom.time_net = neural::load_mlp_json(dir + "/time_net.json");
    std::ifstream is(dir + "/rom.json");
    if (!is) throw std::runtime_error("cannot open " + dir + "/rom.json");
    nlohmann::json j;
    is >> j;
    rom.problem_id = j.at("problem").get<std::string>();
    rom.ts_horizon = j.at("ts_horizon").get<double>();
    rom.fixed_dts = j.at("fixed_dts").get<double>();
    rom.adaptive_tol = j.at("adaptive_tol").get<double>();
    return rom;
}

ode::Rhs make_neural_rhs(const Mlp& dynamics,
                         const problems::ParametricProblem& prob,
                         const Vec& mu) {
    const Vec mu_hat = prob.norm.param_fwd(mu);
    const auto dyn_inv = prob.norm.dyn_inv;
    return [&dynamics, mu_hat, dyn_inv, mu](double, const Vec& u_hat) {
        Vec in(u_hat.size() + mu_hat.size());
        in << u_hat, mu_hat;
        return dyn_inv(dynamics.forward(in), mu);
    };
}

std::vector<double> recover_time(const Mat& states_hat, const Mlp& time_net,
                                 const problems::ParametricProblem& prob,
                                 const Vec& mu, double dts) {
    const Eigen::Index n_pts = states_hat.cols();
    if (n_pts < 3)
        throw std::invalid_argument("recover_time: need at least 3 grid points");
    const Vec mu_hat = prob.norm.param_fwd(mu);
    Mat in(states_hat.rows() + mu_hat.size(), n_pts);
    in.topRows(states_hat.rows()) = states_hat;
    in.bottomRows(mu_hat.size()).colwise() = mu_hat;
    // One batched evaluation over the whole rollout.
    const Mat out = time_net.forward(in);
    const double tscale = prob.norm.time_scale(mu);
    std::vector<double> tdot(n_pts);
    for (Eigen::Index i = 0; i < n_pts; ++i) {
        tdot[i] = std::exp(out(0, i)) * tscale;
        if (!(tdot[i] > 0.0))
            throw std::runtime_error(
                "recover_time: non-positive de-normalized dt/dts");
    }
    return util::cumulative_simpson(tdot, dts);
}

InferResult infer(const RomModel& rom, const Vec& mu,
                  const SolverChoice& solver) {
    const auto& prob = rom.problem();
    InferResult res;

    const Vec u0_hat = prob.norm.state_fwd(prob.initial_state(mu), mu);
    const ode::Rhs rhs = make_neural_rhs(rom.dynamics, prob, mu);

    const double dts = solver.dts;
    ode::SolveOptions opts;
    opts.store_derivatives = false;

    ode::SolveResult solve;
    if (solver.fixed) {
        solve = ode::solve_fixed(rhs, u0_hat, 0.0, rom.ts_horizon, dts,
                                 ode::zonneveld43(), opts);
    } else {
        solve = ode::solve_adaptive(rhs, u0_hat, 0.0, rom.ts_horizon, solver.tol,
                                    ode::zonneveld43(), opts);
    }
    res.stats = solve.stats;
    res.status = solve.status;
    if (solve.trajectory.size() < 3) {
        res.reached_final_time = false;
        return res;
    }

    // Uniform grid for time recovery and metrics; adaptive solutions are
    // interpolated onto it.
    const double reached_ts = solve.trajectory.times.back();
    const int n_grid = std::max(2, static_cast<int>(std::round(reached_ts / dts)));
    res.ts.resize(n_grid + 1);
    for (int i = 0; i <= n_grid; ++i)
        res.ts[i] = reached_ts * static_cast<double>(i) / n_grid;
    const auto grid_states = ode::interpolate(solve.trajectory, res.ts);

    res.states_hat.resize(prob.n_state, n_grid + 1);
    for (int i = 0; i <= n_grid; ++i) res.states_hat.col(i) = grid_states[i];

    res.t = recover_time(res.states_hat, rom.time_net, prob, mu,
                         res.ts[1] - res.ts[0]);

    res.states.resize(prob.n_state, n_grid + 1);
    for (int i = 0; i <= n_grid; ++i)
        res.states.col(i) =
            prob.norm.state_inv(res.states_hat.col(i), mu);

    const double t_target = prob.horizon(mu) * rom.ts_horizon;
    res.reached_final_time =
        solve.status == ode::SolveStatus::success &&
        res.t.back() >= 0.95 * t_target;
    return res;
}

}  // namespace stiffode::rom
