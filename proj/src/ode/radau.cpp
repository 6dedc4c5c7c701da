#include "stiffode/ode/radau.hpp"

#include <Eigen/Dense>

#include <cfloat>
#include <cmath>
#include <complex>
#include <limits>

namespace stiffode::ode {

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using std::complex;

const double kS6 = std::sqrt(6.0);

// Stage abscissae of the 3-stage Radau IIA collocation method.
const double kC[3] = {(4.0 - kS6) / 10.0, (4.0 + kS6) / 10.0, 1.0};

// Embedded third-order error weights applied to the stage increments.
const double kE[3] = {(-13.0 - 7.0 * kS6) / 3.0, (-13.0 + 7.0 * kS6) / 3.0,
                      -1.0 / 3.0};

// Eigenvalues of inv(A): one real value and a complex-conjugate pair. The
// stage system is block-diagonalized with the transformation T/TI below so
// each Newton iteration costs one real and one complex back-substitution.
// See Hairer & Wanner, "Solving ODEs II", ch. IV.8 for the construction.
const double kMuReal = 3.0 + std::cbrt(9.0) - std::cbrt(3.0);
const complex<double> kMuComplex(
    3.0 + 0.5 * (std::cbrt(3.0) - std::cbrt(9.0)),
    -0.5 * (std::pow(3.0, 5.0 / 6.0) + std::pow(3.0, 7.0 / 6.0)));

const double kT[3][3] = {
    {0.09443876248897524, -0.14125529502095421, 0.03002919410514742},
    {0.25021312296533332, 0.20412935229379994, -0.38294211275726192},
    {1.0, 1.0, 0.0}};
const double kTI[3][3] = {
    {4.17871859155190428, 0.32768282076106237, 0.52337644549944951},
    {-4.17871859155190428, -0.32768282076106237, 0.47662355450055044},
    {0.50287263494578682, -2.57192694985560522, 0.59603920482822492}};

// Collocation-polynomial coefficients, used to warm-start the Newton
// iteration of the following step.
const double kP[3][3] = {
    {13.0 / 3.0 + 7.0 * kS6 / 3.0, -23.0 / 3.0 - 22.0 * kS6 / 3.0,
     10.0 / 3.0 + 5.0 * kS6},
    {13.0 / 3.0 - 7.0 * kS6 / 3.0, -23.0 / 3.0 + 22.0 * kS6 / 3.0,
     10.0 / 3.0 - 5.0 * kS6},
    {1.0 / 3.0, -8.0 / 3.0, 10.0 / 3.0}};

double scaled_rms(const Vec& v, const Vec& scale) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double r = v(i) / scale(i);
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(v.size()));
}

double block_scaled_rms(const Mat& z, const Vec& scale) {
    double acc = 0.0;
    for (int r = 0; r < 3; ++r)
        for (Eigen::Index i = 0; i < scale.size(); ++i) {
            const double x = z(r, i) / scale(i);
            acc += x * x;
        }
    return std::sqrt(acc / static_cast<double>(3 * scale.size()));
}

struct NewtonOutcome {
    bool converged = false;
    bool nonfinite = false;
    int iterations = 0;
    double rate = -1.0;
    Mat z;  // 3 x n stage increments
};

}  // namespace

SolveResult radau_solve(const Rhs& f, const Jacobian& jac, const Vec& u0,
                        double t0, double tf, const Tolerance& tol,
                        const RadauOptions& opts) {
    if (!(tf > t0)) throw std::invalid_argument("radau_solve: tf must exceed t0");
    const Eigen::Index n = u0.size();

    SolveResult res;
    auto record = [&](double t, const Vec& u, const Vec& deriv) {
        if (!opts.store_trajectory) return;
        res.trajectory.times.push_back(t);
        res.trajectory.states.push_back(u);
        if (opts.store_derivatives) res.trajectory.derivatives.push_back(deriv);
    };

    const double newton_tol =
        std::max(10.0 * DBL_EPSILON / tol.rtol, std::min(0.03, std::sqrt(tol.rtol)));

    Vec y = u0;
    double t = t0;
    Vec f0 = f(t, y);
    res.stats.n_fev += 1;
    record(t, y, f0);
    res.last_valid_time = t;

    double h = opts.initial_dt > 0.0
                   ? opts.initial_dt
                   : initial_step_size(f, t0, u0, f0, tf, tol, 3, res.stats);

    Mat J = jac(t, y);
    res.stats.n_jev += 1;
    bool current_jac = true;

    Eigen::PartialPivLU<Mat> lu_real;
    Eigen::PartialPivLU<CMat> lu_complex;
    bool lu_valid = false;
    double lu_h = 0.0;

    bool have_sol = false;
    double sol_t = 0.0, sol_h = 0.0;
    Vec sol_y;
    Mat sol_q;  // n x 3

    const Mat identity = Mat::Identity(n, n);

    auto dt_floor = [&](double at_t) {
        const double rel = 10.0 * DBL_EPSILON * std::abs(at_t);
        const double user = opts.dt_min_factor > 0.0
                                ? opts.dt_min_factor * (tf - t0)
                                : 0.0;
        return std::max({rel, user, 1e-300});
    };

    auto factorize = [&](double hh) -> bool {
        const Mat m_real = (kMuReal / hh) * identity - J;
        lu_real.compute(m_real);
        CMat m_cplx = (-J).cast<complex<double>>();
        m_cplx.diagonal().array() += kMuComplex / hh;
        lu_complex.compute(m_cplx);
        res.stats.n_lu += 2;
        lu_valid = true;
        lu_h = hh;
        const auto& diag_r = lu_real.matrixLU().diagonal();
        const auto& diag_c = lu_complex.matrixLU().diagonal();
        for (Eigen::Index i = 0; i < n; ++i) {
            if (diag_r(i) == 0.0 || !std::isfinite(diag_r(i))) return false;
            if (diag_c(i) == complex<double>(0.0, 0.0) ||
                !std::isfinite(std::abs(diag_c(i))))
                return false;
        }
        return true;
    };

    auto newton = [&](double hh, const Mat& z0, const Vec& scale) {
        NewtonOutcome out;
        Mat w(3, n);
        for (int r = 0; r < 3; ++r)
            w.row(r) = kTI[r][0] * z0.row(0) + kTI[r][1] * z0.row(1) +
                       kTI[r][2] * z0.row(2);
        Mat z = z0;
        Mat fs(3, n);
        double dw_norm_old = -1.0;
        for (int k = 0; k < opts.max_newton_iter; ++k) {
            out.iterations = k + 1;
            for (int i = 0; i < 3; ++i) {
                const Vec fi = f(t + kC[i] * hh, y + z.row(i).transpose());
                res.stats.n_fev += 1;
                if (!fi.allFinite()) {
                    out.nonfinite = true;
                    out.z = z;
                    return out;
                }
                fs.row(i) = fi.transpose();
            }
            Vec rhs_real = (kTI[0][0] * fs.row(0) + kTI[0][1] * fs.row(1) +
                            kTI[0][2] * fs.row(2))
                               .transpose() -
                           (kMuReal / hh) * w.row(0).transpose();
            CVec rhs_cplx(n);
            for (Eigen::Index i = 0; i < n; ++i) {
                const complex<double> ti_f(
                    kTI[1][0] * fs(0, i) + kTI[1][1] * fs(1, i) + kTI[1][2] * fs(2, i),
                    kTI[2][0] * fs(0, i) + kTI[2][1] * fs(1, i) + kTI[2][2] * fs(2, i));
                rhs_cplx(i) =
                    ti_f - (kMuComplex / hh) * complex<double>(w(1, i), w(2, i));
            }
            const Vec dw_real = lu_real.solve(rhs_real);
            const CVec dw_cplx = lu_complex.solve(rhs_cplx);
            Mat dw(3, n);
            dw.row(0) = dw_real.transpose();
            dw.row(1) = dw_cplx.real().transpose();
            dw.row(2) = dw_cplx.imag().transpose();
            if (!dw.allFinite()) {
                out.nonfinite = true;
                out.z = z;
                return out;
            }
            const double dw_norm = block_scaled_rms(dw, scale);
            if (dw_norm_old > 0.0) out.rate = dw_norm / dw_norm_old;
            if (out.rate >= 0.0 &&
                (out.rate >= 1.0 ||
                 std::pow(out.rate, opts.max_newton_iter - k) / (1.0 - out.rate) *
                         dw_norm >
                     newton_tol))
                break;  // diverging or too slow to make the tolerance
            w += dw;
            for (int r = 0; r < 3; ++r)
                z.row(r) = kT[r][0] * w.row(0) + kT[r][1] * w.row(1) +
                           kT[r][2] * w.row(2);
            if (dw_norm == 0.0 ||
                (out.rate >= 0.0 && out.rate / (1.0 - out.rate) * dw_norm < newton_tol)) {
                out.converged = true;
                break;
            }
            dw_norm_old = dw_norm;
        }
        out.z = z;
        return out;
    };

    bool rejected_this_step = false;
    while (t < tf) {
        h = std::min(h, tf - t);
        if (!lu_valid || lu_h != h) {
            if (!factorize(h)) {
                res.status = SolveStatus::singular_matrix;
                res.message = "singular Radau iteration matrix at t = " +
                              std::to_string(t);
                return res;
            }
        }

        Mat z0 = Mat::Zero(3, n);
        if (have_sol) {
            for (int i = 0; i < 3; ++i) {
                const double x = (t + kC[i] * h - sol_t) / sol_h;
                const Vec pred = sol_y + sol_q * Vec{{x, x * x, x * x * x}};
                z0.row(i) = (pred - y).transpose();
            }
        }

        const Vec newton_scale =
            (tol.atol + tol.rtol * y.cwiseAbs().array()).matrix();
        NewtonOutcome nw = newton(h, z0, newton_scale);

        if (!nw.converged) {
            if (!current_jac) {
                J = jac(t, y);
                res.stats.n_jev += 1;
                current_jac = true;
                lu_valid = false;
                continue;
            }
            h *= 0.5;
            lu_valid = false;
            if (h < dt_floor(t)) {
                res.status = SolveStatus::newton_failure;
                res.message = "Newton iteration failed to converge at t = " +
                              std::to_string(t);
                return res;
            }
            continue;
        }

        const Vec y_new = y + nw.z.row(2).transpose();
        const Vec ze =
            (kE[0] * nw.z.row(0) + kE[1] * nw.z.row(1) + kE[2] * nw.z.row(2))
                .transpose() /
            h;
        const Vec err_scale =
            (tol.atol + tol.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array())
                .matrix();
        Vec err = lu_real.solve(f0 + ze);
        double eps = scaled_rms(err, err_scale);

        if (rejected_this_step && eps > 1.0) {
            // Stabilized estimate: one extra evaluation through the same
            // smoothing solve.
            const Vec f_stab = f(t, y + err);
            res.stats.n_fev += 1;
            if (f_stab.allFinite()) {
                err = lu_real.solve(f_stab + ze);
                eps = scaled_rms(err, err_scale);
            }
        }

        if (eps <= 1.0) {
            // Keep the collocation polynomial for the next warm start.
            sol_t = t;
            sol_h = h;
            sol_y = y;
            sol_q.resize(n, 3);
            for (int col = 0; col < 3; ++col)
                sol_q.col(col) = kP[0][col] * nw.z.row(0).transpose() +
                                 kP[1][col] * nw.z.row(1).transpose() +
                                 kP[2][col] * nw.z.row(2).transpose();
            have_sol = true;

            t += h;
            y = y_new;
            f0 = f(t, y);
            res.stats.n_fev += 1;
            record(t, y, f0);
            res.last_valid_time = t;
            res.stats.n_steps_accepted += 1;

            if (nw.rate > opts.jac_refresh_rate) {
                J = jac(t, y);
                res.stats.n_jev += 1;
                current_jac = true;
            } else {
                current_jac = false;
            }
            h = next_step_size(h, eps, 3);
            lu_valid = false;
            rejected_this_step = false;
        } else {
            res.stats.n_steps_rejected += 1;
            rejected_this_step = true;
            if (!current_jac) {
                J = jac(t, y);
                res.stats.n_jev += 1;
                current_jac = true;
            }
            h = next_step_size(h, eps, 3);
            lu_valid = false;
            if (h < dt_floor(t)) {
                res.status = SolveStatus::step_underflow;
                res.message = "step size underflow at t = " + std::to_string(t);
                return res;
            }
        }
    }
    return res;
}

}  // namespace stiffode::ode
