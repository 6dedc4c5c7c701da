#pragma once

#include <Eigen/Dense>
#include <optional>

namespace stiffode::ode {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Runge-Kutta coefficient table. `order` is the classical order of the
/// advancing solution; `error_order` the order of the embedded estimate
/// (drives the step-size exponent 1/(q+1)).
struct ButcherTableau {
    int stages = 0;
    Mat a;
    Vec b;
    std::optional<Vec> b_star;
    Vec c;
    int order = 0;
    int error_order = 0;

    bool is_explicit() const;
    /// Throws std::invalid_argument when the row-sum condition
    /// c_i = sum_{j<i} a_ij fails (explicit tableaux), when sum(b) != 1,
    /// or when dimensions are inconsistent.
    void validate() const;
};

/// Classic fourth-order method, fixed-step use only (no embedded weights).
const ButcherTableau& rk4_classic();

/// Dormand-Prince 5(4) pair with FSAL structure.
const ButcherTableau& dopri54();

/// Zonneveld 4(3): classic RK4 advancing weights plus one extra stage for
/// an embedded third-order estimate. Five stages, so a fixed-step rollout
/// costs exactly 5 evaluations per step.
const ButcherTableau& zonneveld43();

}  // namespace stiffode::ode
