#include "stiffode/ode/trajectory.hpp"

#include "stiffode/util/fmt.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace stiffode::ode {

Tolerance::Tolerance(double atol_, double rtol_) : atol(atol_), rtol(rtol_) {
    if (!(atol > 0.0) || !(rtol > 0.0))
        throw std::invalid_argument("tolerances must be positive");
}

std::vector<Vec> interpolate(const Trajectory& traj,
                             const std::vector<double>& t_query) {
    if (traj.size() < 2) throw std::invalid_argument("interpolate: need at least two samples");
    const double t_front = traj.times.front();
    const double t_back = traj.times.back();
    const bool hermite = traj.has_derivatives();

    std::vector<Vec> out;
    out.reserve(t_query.size());
    for (double tq : t_query) {
        if (tq < t_front || tq > t_back)
            throw std::out_of_range("interpolate: query outside trajectory range");
        auto it = std::upper_bound(traj.times.begin(), traj.times.end(), tq);
        std::size_t hi = std::min<std::size_t>(it - traj.times.begin(),
                                               traj.times.size() - 1);
        if (hi == 0) hi = 1;
        const std::size_t lo = hi - 1;
        const double t0 = traj.times[lo];
        const double t1 = traj.times[hi];
        const double h = t1 - t0;
        const double s = (tq - t0) / h;
        const Vec& u0 = traj.states[lo];
        const Vec& u1 = traj.states[hi];
        if (!hermite) {
            out.push_back((1.0 - s) * u0 + s * u1);
            continue;
        }
        const Vec& d0 = traj.derivatives[lo];
        const Vec& d1 = traj.derivatives[hi];
        const double s2 = s * s;
        const double s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1;
        const double h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2;
        const double h11 = s3 - s2;
        out.push_back(h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1);
    }
    return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    const Eigen::Index n = traj.states.empty() ? 0 : traj.states.front().size();
    os << "t";
    for (Eigen::Index i = 1; i <= n; ++i) os << ",u_" << i;
    os << "\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        os << util::format_g17(traj.times[k]);
        for (Eigen::Index i = 0; i < n; ++i)
            os << "," << util::format_g17(traj.states[k](i));
        os << "\n";
    }
}

std::string stats_to_json(const SolveStats& stats) {
    nlohmann::json j;
    j["n_fev"] = stats.n_fev;
    j["n_jev"] = stats.n_jev;
    j["n_lu"] = stats.n_lu;
    j["n_steps_accepted"] = stats.n_steps_accepted;
    j["n_steps_rejected"] = stats.n_steps_rejected;
    j["time_s"] = stats.time_s;
    return j.dump(2);
}

void write_stats_json(const SolveStats& stats, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << stats_to_json(stats) << "\n";
}

}  // namespace stiffode::ode
