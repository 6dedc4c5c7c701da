#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace stiffode::ode {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct Tolerance {
    double atol = 1e-6;
    double rtol = 1e-6;

    Tolerance() = default;
    Tolerance(double atol_, double rtol_);
};

/// Time-ordered samples of one solve. `derivatives` is either empty or has
/// one f-value per sample (enables cubic Hermite interpolation).
struct Trajectory {
    std::vector<double> times;
    std::vector<Vec> states;
    std::vector<Vec> derivatives;

    std::size_t size() const { return times.size(); }
    bool has_derivatives() const { return derivatives.size() == times.size() && !times.empty(); }
};

struct SolveStats {
    std::int64_t n_fev = 0;
    std::int64_t n_jev = 0;
    std::int64_t n_lu = 0;
    std::int64_t n_steps_accepted = 0;
    std::int64_t n_steps_rejected = 0;
    double time_s = 0.0;
};

enum class SolveStatus {
    success,
    nonfinite_state,
    step_underflow,
    newton_failure,
    singular_matrix,
};

struct SolveResult {
    Trajectory trajectory;
    SolveStats stats;
    SolveStatus status = SolveStatus::success;
    /// Last time at which the state was still valid (diagnostic on failure).
    double last_valid_time = 0.0;
    std::string message;

    bool ok() const { return status == SolveStatus::success; }
};

/// Interpolate the trajectory at query times. Cubic Hermite when derivatives
/// are stored, linear otherwise; exact at the stored sample points.
/// Throws std::out_of_range for queries outside [front, back].
std::vector<Vec> interpolate(const Trajectory& traj,
                             const std::vector<double>& t_query);

/// CSV export with header `t,u_1,...,u_N`, 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

/// JSON export with keys n_fev,n_jev,n_lu,n_steps_accepted,n_steps_rejected,time_s.
void write_stats_json(const SolveStats& stats, const std::string& path);
std::string stats_to_json(const SolveStats& stats);

}  // namespace stiffode::ode
