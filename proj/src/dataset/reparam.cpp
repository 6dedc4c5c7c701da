#include "stiffode/dataset/reparam.hpp"

#include "stiffode/dataset/savgol.hpp"
#include "stiffode/ode/radau.hpp"

#include <cmath>
#include <stdexcept>

namespace stiffode::dataset {

ode::SolveResult generate_reference(const problems::ParametricProblem& prob,
                                    const Vec& mu, const ode::Tolerance& tol) {
    const double tf = prob.horizon(mu);
    const Vec u0 = prob.initial_state(mu);
    ode::Rhs f = [&prob, mu](double t, const Vec& u) {
        return prob.rhs(t, u, mu);
    };
    ode::Jacobian j = [&prob, mu](double t, const Vec& u) {
        return prob.jacobian(t, u, mu);
    };
    return ode::radau_solve(f, j, u0, 0.0, tf, tol);
}

ReparamSeries reparametrize(const ode::Trajectory& traj,
                            const problems::ParametricProblem& prob,
                            const Vec& mu) {
    if (traj.size() < 3)
        throw std::invalid_argument(
            "reparametrize: need at least 3 accepted points");
    const int n = static_cast<int>(traj.size()) - 1;
    ReparamSeries s;
    s.mu = mu;
    s.ts.resize(n + 1);
    s.t.resize(n + 1);
    s.states.resize(n + 1, prob.n_state);
    const double t0 = traj.times.front();
    for (int i = 0; i <= n; ++i) {
        s.ts[i] = static_cast<double>(i) / n;
        s.t[i] = traj.times[i] - t0;
        s.states.row(i) = prob.norm.state_fwd(traj.states[i], mu).transpose();
    }
    return s;
}

void estimate_derivatives(ReparamSeries& series,
                          const problems::ParametricProblem& prob, int window,
                          int order) {
    const int len = static_cast<int>(series.ts.size());
    if (window >= 10)
        throw std::invalid_argument("estimate_derivatives: window must be < 10");
    if (len < window)
        throw std::invalid_argument(
            "estimate_derivatives: series shorter than filter window");
    const double n = static_cast<double>(series.n());

    // State derivatives per component, then map rows through the dynamics
    // normalizer.
    Mat fs_raw(len, series.states.cols());
    std::vector<double> col(len);
    for (Eigen::Index c = 0; c < series.states.cols(); ++c) {
        for (int i = 0; i < len; ++i) col[i] = series.states(i, c);
        const auto d = savgol_derivative(col, window, order);
        for (int i = 0; i < len; ++i) fs_raw(i, c) = d[i] * n;
    }
    series.fs.resize(len, series.states.cols());
    for (int i = 0; i < len; ++i)
        series.fs.row(i) =
            prob.norm.dyn_fwd(fs_raw.row(i).transpose(), series.mu).transpose();

    // Time derivative, normalized by the problem time scale. The centered
    // filter is a positive generalized difference on increasing data; only
    // the one-sided boundary fits can undershoot, fall back to degree 1
    // there.
    const double tscale = prob.norm.time_scale(series.mu);
    auto tderiv = savgol_derivative(series.t, window, order);
    series.tdot.resize(len);
    const int half = window / 2;
    for (int i = 0; i < len; ++i) {
        double v = tderiv[i] * n / tscale;
        if (v <= 0.0 && (i < half || i >= len - half)) {
            std::vector<double> pos(window);
            const int base = i < half ? 0 : len - window;
            for (int k = 0; k < window; ++k) pos[k] = base + k;
            const Eigen::VectorXd w = savgol_weights(pos, i, 1, 1);
            double acc = 0.0;
            for (int k = 0; k < window; ++k) acc += w(k) * series.t[base + k];
            v = acc * n / tscale;
        }
        if (!(v > 0.0))
            throw std::runtime_error(
                "estimate_derivatives: non-positive dt/dts estimate");
        series.tdot[i] = v;
    }
}

ReparamSeries resample_uniform(const ReparamSeries& series, double dts) {
    if (!(dts > 0.0) || dts > 1.0)
        throw std::invalid_argument("resample_uniform: dts must be in (0, 1]");
    const double m_real = 1.0 / dts;
    const int m = static_cast<int>(std::lround(m_real));
    if (std::abs(m * dts - 1.0) > 1e-9)
        throw std::invalid_argument("resample_uniform: dts must divide 1");

    ode::Trajectory traj;
    traj.times = series.ts;
    traj.states.reserve(series.ts.size());
    for (std::size_t i = 0; i < series.ts.size(); ++i)
        traj.states.push_back(series.states.row(i).transpose());

    ReparamSeries out;
    out.mu = series.mu;
    out.ts.resize(m + 1);
    for (int i = 0; i <= m; ++i) out.ts[i] = static_cast<double>(i) / m;

    const auto states = ode::interpolate(traj, out.ts);
    out.states.resize(m + 1, series.states.cols());
    for (int i = 0; i <= m; ++i) out.states.row(i) = states[i].transpose();

    auto interp_scalar = [&](const std::vector<double>& y) {
        ode::Trajectory tr;
        tr.times = series.ts;
        for (double v : y) {
            Vec s(1);
            s << v;
            tr.states.push_back(s);
        }
        const auto vals = ode::interpolate(tr, out.ts);
        std::vector<double> o(m + 1);
        for (int i = 0; i <= m; ++i) o[i] = vals[i](0);
        return o;
    };
    out.t = interp_scalar(series.t);

    if (series.has_derivatives()) {
        ode::Trajectory tf;
        tf.times = series.ts;
        for (std::size_t i = 0; i < series.ts.size(); ++i)
            tf.states.push_back(series.fs.row(i).transpose());
        const auto fsv = ode::interpolate(tf, out.ts);
        out.fs.resize(m + 1, series.fs.cols());
        for (int i = 0; i <= m; ++i) out.fs.row(i) = fsv[i].transpose();
        out.tdot = interp_scalar(series.tdot);
    }
    return out;
}

}  // namespace stiffode::dataset
