#pragma once

#include "stiffode/ode/trajectory.hpp"

#include <array>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace stiffode::problems {

using ode::Mat;
using ode::Vec;

enum class GridRole { train, validation, test };

struct ParamGrid {
    GridRole role;
    std::vector<Vec> points;
};

/// Serializable description of one normalization map (for manifests).
struct NormalizerSpec {
    std::string kind;  // affine | log10 | scaled-log10 | piecewise-symlog | component-map
    std::vector<double> params;
};

/// Structural tag of the dynamics normalizer inverse, used to build the
/// de-normalization into differentiable unrolls.
enum class DynInvKind { identity, col_scale, symlog };

/// Per-problem normalization maps. All forward maps are strictly monotone
/// componentwise; inverse(forward(x)) recovers x on the data range.
struct ProblemNormalizers {
    std::function<Vec(const Vec&, const Vec&)> state_fwd, state_inv;
    std::function<Vec(const Vec&)> param_fwd, param_inv;
    std::function<Vec(const Vec&, const Vec&)> dyn_fwd, dyn_inv;
    /// Normalized time is t / time_scale(mu).
    std::function<double(const Vec&)> time_scale;
    DynInvKind dyn_kind = DynInvKind::identity;
    /// Per-component inverse scale for DynInvKind::col_scale.
    std::function<Vec(const Vec&)> dyn_scale;
    NormalizerSpec state_spec, param_spec, dyn_spec, time_spec;
};

struct RomDefaults {
    /// Reparametrized horizon for inference, in units where the training
    /// window is [0, 1]. Above 1 extrapolates beyond the training data.
    double ts_horizon = 1.0;
    double fixed_dts = 1.0 / 160.0;
    double adaptive_tol = 2e-4;
    bool prefer_fixed = false;
};

struct ParametricProblem {
    std::string name;
    int n_state = 0;
    int n_param = 0;
    std::function<double(const Vec&)> horizon;
    std::function<Vec(const Vec&)> initial_state;
    std::function<Vec(double, const Vec&, const Vec&)> rhs;
    std::function<Mat(double, const Vec&, const Vec&)> jacobian;
    /// Componentwise parameter intervals; degenerate intervals pin a value.
    std::vector<std::pair<double, double>> param_space;
    std::function<std::vector<Vec>()> train_grid, validation_grid, test_grid;
    ProblemNormalizers norm;
    ode::Tolerance reference_tol{1e-10, 1e-10};
    /// Radau tolerance used for the cost-comparison rows.
    ode::Tolerance benchmark_tol{1e-3, 1e-3};
    RomDefaults rom;
    int dpeak_component = -1;     // -1: peak metric not meaningful
    std::vector<int> l2_components;  // empty: all components
    bool table_uses_l2 = true;    // false: report MSE in t instead

    Vec rhs_checked(double t, const Vec& u, const Vec& mu) const;
    Mat jacobian_checked(double t, const Vec& u, const Vec& mu) const;
};

/// Registry lookup by id: vdp, orego, rober, e5, pollu.
/// Throws std::out_of_range with the list of valid ids for unknown names.
const ParametricProblem& get(const std::string& id);
std::vector<std::string> ids();

ParamGrid param_grid(const std::string& id, GridRole role);

/// POLLU reference rates (Table of 25 reaction constants).
const std::array<double, 25>& pollu_reference_rates();
/// Human-readable factors of each reaction (e.g. "u2*u4"), for the CSV asset.
std::vector<std::string> pollu_rate_factors();
void write_pollu_rates_csv(const std::string& path);

// Grid construction helpers (shared with tests).
std::vector<double> linspace(double lo, double hi, int n);
std::vector<double> logspace10(double exp_lo, double exp_hi, int n);
std::vector<double> arithmetic_midpoints(const std::vector<double>& xs);
std::vector<double> geometric_midpoints(const std::vector<double>& xs);

}  // namespace stiffode::problems
