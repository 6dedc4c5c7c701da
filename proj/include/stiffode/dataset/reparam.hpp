#pragma once

#include "stiffode/ode/trajectory.hpp"
#include "stiffode/problems/problems.hpp"

#include <vector>

namespace stiffode::dataset {

using ode::Mat;
using ode::Vec;

/// One reference solve re-indexed to the solver-induced uniform grid
/// ts[i] = i/n, where n+1 is the number of accepted points. States are kept
/// in normalized form; fs holds the normalized dynamics targets d(state)/dts
/// once estimated; tdot holds dt/dts divided by the problem time scale
/// (strictly positive).
struct ReparamSeries {
    Vec mu;
    std::vector<double> ts;
    std::vector<double> t;
    Mat states;              // (n+1) x N_u
    Mat fs;                  // (n+1) x N_u, empty until estimated
    std::vector<double> tdot;  // empty until estimated

    int n() const { return static_cast<int>(ts.size()) - 1; }
    bool has_derivatives() const {
        return fs.rows() == static_cast<Eigen::Index>(ts.size()) &&
               tdot.size() == ts.size();
    }
};

/// Radau reference solve at the problem's (or explicit) tight tolerances.
ode::SolveResult generate_reference(const problems::ParametricProblem& prob,
                                    const Vec& mu, const ode::Tolerance& tol);

/// Re-index the accepted points of an adaptive solve to ts[i] = i/n and
/// normalize the states. Requires at least 3 points.
ReparamSeries reparametrize(const ode::Trajectory& traj,
                            const problems::ParametricProblem& prob,
                            const Vec& mu);

/// Fill fs and tdot with Savitzky-Golay derivative estimates on the uniform
/// ts grid (spacing 1/n). Boundary points use one-sided windows; a boundary
/// tdot estimate that fails positivity falls back to a degree-1 fit, which
/// is positive for strictly increasing t.
void estimate_derivatives(ReparamSeries& series,
                          const problems::ParametricProblem& prob, int window,
                          int order);

/// Interpolate the series onto the uniform grid {0, dts, ..., 1}.
/// dts must divide 1 within rounding.
ReparamSeries resample_uniform(const ReparamSeries& series, double dts);

}  // namespace stiffode::dataset
