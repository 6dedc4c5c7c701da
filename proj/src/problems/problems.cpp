#include "stiffode/problems/problems.hpp"

#include <array>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace stiffode::problems {

ParametricProblem make_pollu();  // pollu.cpp

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (int i = 0; i < n; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
}

std::vector<double> logspace10(double exp_lo, double exp_hi, int n) {
    std::vector<double> out(n);
    const auto exps = linspace(exp_lo, exp_hi, n);
    for (int i = 0; i < n; ++i) out[i] = std::pow(10.0, exps[i]);
    return out;
}

std::vector<double> arithmetic_midpoints(const std::vector<double>& xs) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        out.push_back(0.5 * (xs[i] + xs[i + 1]));
    return out;
}

std::vector<double> geometric_midpoints(const std::vector<double>& xs) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        out.push_back(std::sqrt(xs[i] * xs[i + 1]));
    return out;
}

namespace {

std::vector<Vec> cartesian(const std::vector<std::vector<double>>& axes) {
    std::vector<Vec> out;
    std::size_t total = 1;
    for (const auto& ax : axes) total *= ax.size();
    out.reserve(total);
    std::vector<std::size_t> idx(axes.size(), 0);
    for (std::size_t k = 0; k < total; ++k) {
        Vec p(axes.size());
        for (std::size_t d = 0; d < axes.size(); ++d) p(d) = axes[d][idx[d]];
        out.push_back(p);
        for (std::size_t d = axes.size(); d-- > 0;) {
            if (++idx[d] < axes[d].size()) break;
            idx[d] = 0;
        }
    }
    return out;
}

Vec vec1(double x) {
    Vec v(1);
    v << x;
    return v;
}

void check_positive(const Vec& u, const char* what) {
    for (Eigen::Index i = 0; i < u.size(); ++i)
        if (!(u(i) > 0.0))
            throw std::domain_error(std::string(what) +
                                    ": log of non-positive component " +
                                    std::to_string(i + 1));
}

// --------------------------------------------------------------------------
// Van der Pol oscillator, mu in [1e2, 1e4], t in [0, 3.5*mu].
// --------------------------------------------------------------------------

ParametricProblem make_vdp() {
    ParametricProblem p;
    p.name = "vdp";
    p.n_state = 2;
    p.n_param = 1;
    p.horizon = [](const Vec& mu) { return 3.5 * mu(0); };
    p.initial_state = [](const Vec&) {
        Vec u(2);
        u << 2.0, 0.0;
        return u;
    };
    p.rhs = [](double, const Vec& u, const Vec& mu) {
        Vec f(2);
        f(0) = u(1);
        f(1) = mu(0) * (1.0 - u(0) * u(0)) * u(1) - u(0);
        return f;
    };
    p.jacobian = [](double, const Vec& u, const Vec& mu) {
        Mat j(2, 2);
        j(0, 0) = 0.0;
        j(0, 1) = 1.0;
        j(1, 0) = -2.0 * mu(0) * u(0) * u(1) - 1.0;
        j(1, 1) = mu(0) * (1.0 - u(0) * u(0));
        return j;
    };
    p.param_space = {{1e2, 1e4}};
    p.train_grid = [] {
        std::vector<Vec> g;
        for (double m : logspace10(2.0, 4.0, 51)) g.push_back(vec1(m));
        return g;
    };
    p.validation_grid = [] {
        std::vector<Vec> g;
        for (double m : geometric_midpoints(logspace10(2.0, 4.0, 51)))
            g.push_back(vec1(m));
        return g;
    };
    p.test_grid = [] {
        std::vector<Vec> g;
        for (double e : {2.01, 2.67, 3.33, 3.99})
            g.push_back(vec1(std::pow(10.0, e)));
        return g;
    };

    p.norm.state_fwd = [](const Vec& u, const Vec& mu) {
        Vec v(2);
        v << u(0) / 2.0, u(1) / mu(0);
        return v;
    };
    p.norm.state_inv = [](const Vec& v, const Vec& mu) {
        Vec u(2);
        u << 2.0 * v(0), mu(0) * v(1);
        return u;
    };
    p.norm.param_fwd = [](const Vec& mu) { return vec1(std::log10(mu(0))); };
    p.norm.param_inv = [](const Vec& m) { return vec1(std::pow(10.0, m(0))); };
    p.norm.dyn_fwd = [](const Vec& f, const Vec& mu) {
        Vec v(2);
        v << f(0) / 5.0 / mu(0), f(1) / 10.0 / mu(0);
        return v;
    };
    p.norm.dyn_inv = [](const Vec& v, const Vec& mu) {
        Vec f(2);
        f << 5.0 * mu(0) * v(0), 10.0 * mu(0) * v(1);
        return f;
    };
    p.norm.time_scale = [](const Vec& mu) { return mu(0); };
    p.norm.dyn_kind = DynInvKind::col_scale;
    p.norm.dyn_scale = [](const Vec& mu) {
        Vec s(2);
        s << 5.0 * mu(0), 10.0 * mu(0);
        return s;
    };
    p.norm.state_spec = {"component-map", {2.0}};
    p.norm.param_spec = {"log10", {}};
    p.norm.dyn_spec = {"component-map", {5.0, 10.0}};
    p.norm.time_spec = {"component-map", {}};

    p.reference_tol = ode::Tolerance(1e-12, 1e-12);
    p.benchmark_tol = ode::Tolerance(1e-2, 1e-2);
    p.rom.ts_horizon = 5.0 / 3.5;
    p.rom.fixed_dts = 1.0 / 140.0;
    p.rom.prefer_fixed = true;
    p.dpeak_component = 0;
    p.l2_components = {0};
    p.table_uses_l2 = true;
    return p;
}

// --------------------------------------------------------------------------
// OREGO (Oregonator), 3 species, t in [0, 1000].
// --------------------------------------------------------------------------

ParametricProblem make_orego() {
    ParametricProblem p;
    p.name = "orego";
    p.n_state = 3;
    p.n_param = 3;
    p.horizon = [](const Vec&) { return 1000.0; };
    p.initial_state = [](const Vec&) {
        Vec u(3);
        u << 1.0, 2.0, 3.0;
        return u;
    };
    p.rhs = [](double, const Vec& u, const Vec& mu) {
        Vec f(3);
        f(0) = mu(0) * (u(1) - u(0) * u(1) + u(0) - mu(2) * u(0) * u(0));
        f(1) = (-u(1) - u(0) * u(1) + u(2)) / mu(0);
        f(2) = mu(1) * (u(0) - u(2));
        return f;
    };
    p.jacobian = [](double, const Vec& u, const Vec& mu) {
        Mat j(3, 3);
        j(0, 0) = mu(0) * (-u(1) + 1.0 - 2.0 * mu(2) * u(0));
        j(0, 1) = mu(0) * (1.0 - u(0));
        j(0, 2) = 0.0;
        j(1, 0) = -u(1) / mu(0);
        j(1, 1) = (-1.0 - u(0)) / mu(0);
        j(1, 2) = 1.0 / mu(0);
        j(2, 0) = mu(1);
        j(2, 1) = 0.0;
        j(2, 2) = -mu(1);
        return j;
    };
    p.param_space = {{50.0, 100.0}, {0.002, 0.02}, {1e-6, 1e-4}};
    auto axes_train = [] {
        return std::vector<std::vector<double>>{linspace(50.0, 100.0, 6),
                                                linspace(0.002, 0.02, 19),
                                                linspace(1e-6, 1e-4, 21)};
    };
    p.train_grid = [axes_train] { return cartesian(axes_train()); };
    p.validation_grid = [axes_train] {
        auto ax = axes_train();
        return cartesian({arithmetic_midpoints(ax[0]),
                          arithmetic_midpoints(ax[1]),
                          arithmetic_midpoints(ax[2])});
    };
    p.test_grid = [] {
        return cartesian({{52.5, 97.5},
                          {0.025, 0.175},
                          {std::pow(10.0, -5.975), std::pow(10.0, -4.525)}});
    };

    p.norm.state_fwd = [](const Vec& u, const Vec&) {
        check_positive(u, "orego state");
        return Vec(u.array().log10().matrix());
    };
    p.norm.state_inv = [](const Vec& v, const Vec&) {
        return Vec(Eigen::pow(10.0, v.array()).matrix());
    };
    p.norm.param_fwd = [](const Vec& mu) {
        Vec m(3);
        m << mu(0) / 77.27, mu(1) / 0.161, std::log10(mu(2)) / 5.0;
        return m;
    };
    p.norm.param_inv = [](const Vec& m) {
        Vec mu(3);
        mu << 77.27 * m(0), 0.161 * m(1), std::pow(10.0, 5.0 * m(2));
        return mu;
    };
    p.norm.dyn_fwd = [](const Vec& f, const Vec&) { return f; };
    p.norm.dyn_inv = [](const Vec& f, const Vec&) { return f; };
    p.norm.time_scale = [](const Vec&) { return 1.0; };
    p.norm.state_spec = {"log10", {}};
    p.norm.param_spec = {"scaled-log10", {77.27, 0.161, 5.0}};
    p.norm.dyn_spec = {"affine", {1.0}};
    p.norm.time_spec = {"affine", {1.0}};

    p.reference_tol = ode::Tolerance(1e-10, 1e-10);
    p.benchmark_tol = ode::Tolerance(1e-3, 1e-3);
    p.rom.adaptive_tol = 2e-4;
    p.dpeak_component = 1;
    p.l2_components = {};
    p.table_uses_l2 = true;
    return p;
}

// --------------------------------------------------------------------------
// ROBER autocatalytic kinetics, t in [0, 1e11].
// --------------------------------------------------------------------------

ParametricProblem make_rober() {
    ParametricProblem p;
    p.name = "rober";
    p.n_state = 3;
    p.n_param = 3;
    p.horizon = [](const Vec&) { return 1e11; };
    p.initial_state = [](const Vec&) {
        Vec u(3);
        u << 1.0, 0.0, 0.0;
        return u;
    };
    p.rhs = [](double, const Vec& u, const Vec& mu) {
        Vec f(3);
        f(0) = -mu(0) * u(0) + mu(1) * u(1) * u(2);
        f(1) = mu(0) * u(0) - mu(1) * u(1) * u(2) - mu(2) * u(1) * u(1);
        f(2) = mu(2) * u(1) * u(1);
        return f;
    };
    p.jacobian = [](double, const Vec& u, const Vec& mu) {
        Mat j(3, 3);
        j(0, 0) = -mu(0);
        j(0, 1) = mu(1) * u(2);
        j(0, 2) = mu(1) * u(1);
        j(1, 0) = mu(0);
        j(1, 1) = -mu(1) * u(2) - 2.0 * mu(2) * u(1);
        j(1, 2) = -mu(1) * u(1);
        j(2, 0) = 0.0;
        j(2, 1) = 2.0 * mu(2) * u(1);
        j(2, 2) = 0.0;
        return j;
    };
    p.param_space = {{0.005, 0.05}, {1e3, 1e5}, {3e7, 3e7}};
    auto mu1_axis = [] { return linspace(0.005, 0.05, 16); };
    auto mu2_axis = [] { return logspace10(3.0, 5.0, 31); };
    p.train_grid = [=] { return cartesian({mu1_axis(), mu2_axis(), {3e7}}); };
    p.validation_grid = [=] {
        return cartesian({arithmetic_midpoints(mu1_axis()),
                          geometric_midpoints(mu2_axis()),
                          {3e7}});
    };
    p.test_grid = [] {
        return cartesian({{0.006, 0.049},
                          {std::pow(10.0, 3.025), std::pow(10.0, 4.975)},
                          {3e7}});
    };

    auto u2_scale = [](const Vec& mu) {
        const double m1 = -std::log10(mu(0));
        const double m3 = std::log10(mu(2)) / 7.0;
        return std::pow(10.0, 0.5 * (m1 - m3));
    };
    p.norm.state_fwd = [u2_scale](const Vec& u, const Vec& mu) {
        Vec v(3);
        v << u(0), u(1) / u2_scale(mu), u(2);
        return v;
    };
    p.norm.state_inv = [u2_scale](const Vec& v, const Vec& mu) {
        Vec u(3);
        u << v(0), v(1) * u2_scale(mu), v(2);
        return u;
    };
    p.norm.param_fwd = [](const Vec& mu) {
        Vec m(3);
        m << -std::log10(mu(0)), std::log10(mu(1)) / 4.0, std::log10(mu(2)) / 7.0;
        return m;
    };
    p.norm.param_inv = [](const Vec& m) {
        Vec mu(3);
        mu << std::pow(10.0, -m(0)), std::pow(10.0, 4.0 * m(1)),
            std::pow(10.0, 7.0 * m(2));
        return mu;
    };
    p.norm.dyn_fwd = [](const Vec& f, const Vec&) { return f; };
    p.norm.dyn_inv = [](const Vec& f, const Vec&) { return f; };
    p.norm.time_scale = [](const Vec&) { return 1.0; };
    p.norm.state_spec = {"component-map", {}};
    p.norm.param_spec = {"scaled-log10", {-1.0, 4.0, 7.0}};
    p.norm.dyn_spec = {"affine", {1.0}};
    p.norm.time_spec = {"affine", {1.0}};

    p.reference_tol = ode::Tolerance(1e-14, 1e-10);
    p.benchmark_tol = ode::Tolerance(1e-7, 1e-4);
    p.rom.adaptive_tol = 2e-4;
    p.dpeak_component = -1;
    p.table_uses_l2 = false;
    return p;
}

// --------------------------------------------------------------------------
// E5 pyrolysis, 4 species, t in [0, 1e11]. u3' is computed through
// u3' = u2' - u4' to avoid digit cancellation.
// --------------------------------------------------------------------------

ParametricProblem make_e5() {
    ParametricProblem p;
    p.name = "e5";
    p.n_state = 4;
    p.n_param = 4;
    p.horizon = [](const Vec&) { return 1e11; };
    p.initial_state = [](const Vec&) {
        Vec u(4);
        u << 1.76e-3, 0.0, 0.0, 0.0;
        return u;
    };
    p.rhs = [](double, const Vec& u, const Vec& mu) {
        Vec f(4);
        f(0) = -mu(0) * u(0) - mu(1) * u(0) * u(2);
        f(1) = mu(0) * u(0) - mu(2) * mu(3) * u(1) * u(2);
        f(3) = mu(1) * u(0) * u(2) - mu(2) * u(3);
        f(2) = f(1) - f(3);
        return f;
    };
    p.jacobian = [](double, const Vec& u, const Vec& mu) {
        Mat j(4, 4);
        j.setZero();
        j(0, 0) = -mu(0) - mu(1) * u(2);
        j(0, 2) = -mu(1) * u(0);
        j(1, 0) = mu(0);
        j(1, 1) = -mu(2) * mu(3) * u(2);
        j(1, 2) = -mu(2) * mu(3) * u(1);
        j(3, 0) = mu(1) * u(2);
        j(3, 2) = mu(1) * u(0);
        j(3, 3) = -mu(2);
        j.row(2) = j.row(1) - j.row(3);
        return j;
    };
    p.param_space = {{5e-10, 5e-9}, {1e7, 1e8}, {1.13e3, 1.13e3}, {1e6, 1e6}};
    auto mu1_axis = [] {
        std::vector<double> v;
        for (double e : linspace(std::log10(5e-10), std::log10(5e-9), 11))
            v.push_back(std::pow(10.0, e));
        return v;
    };
    auto mu2_axis = [] { return logspace10(7.0, 8.0, 11); };
    p.train_grid = [=] {
        return cartesian({mu1_axis(), mu2_axis(), {1.13e3}, {1e6}});
    };
    p.validation_grid = [=] {
        return cartesian({geometric_midpoints(mu1_axis()),
                          geometric_midpoints(mu2_axis()),
                          {1.13e3},
                          {1e6}});
    };
    p.test_grid = [] {
        return cartesian(
            {{5.0 * std::pow(10.0, -9.975), 5.0 * std::pow(10.0, -9.025)},
             {std::pow(10.0, 7.025), std::pow(10.0, 7.975)},
             {1.13e3},
             {1e6}});
    };

    constexpr double kClamp = 1e-30;
    p.norm.state_fwd = [kClamp](const Vec& u, const Vec&) {
        Vec v(u.size());
        for (Eigen::Index i = 0; i < u.size(); ++i)
            v(i) = std::log10(std::max(u(i), kClamp)) / 10.0;
        return v;
    };
    p.norm.state_inv = [](const Vec& v, const Vec&) {
        return Vec(Eigen::pow(10.0, 10.0 * v.array()).matrix());
    };
    p.norm.param_fwd = [](const Vec& mu) {
        return Vec(mu.array().log10().matrix());
    };
    p.norm.param_inv = [](const Vec& m) {
        return Vec(Eigen::pow(10.0, m.array()).matrix());
    };
    auto symlog = [](double x) {
        if (std::abs(x) < 2.0) return x;
        return (x > 0.0 ? 1.0 : -1.0) * (std::log(std::abs(x) - 1.0) + 2.0);
    };
    auto symexp = [](double y) {
        if (std::abs(y) < 2.0) return y;
        return (y > 0.0 ? 1.0 : -1.0) * (std::exp(std::abs(y) - 2.0) + 1.0);
    };
    p.norm.dyn_fwd = [symlog](const Vec& f, const Vec&) {
        Vec v(f.size());
        for (Eigen::Index i = 0; i < f.size(); ++i) v(i) = symlog(f(i));
        return v;
    };
    p.norm.dyn_inv = [symexp](const Vec& v, const Vec&) {
        Vec f(v.size());
        for (Eigen::Index i = 0; i < v.size(); ++i) f(i) = symexp(v(i));
        return f;
    };
    p.norm.time_scale = [](const Vec&) { return 1.0; };
    p.norm.dyn_kind = DynInvKind::symlog;
    p.norm.state_spec = {"scaled-log10", {10.0, kClamp}};
    p.norm.param_spec = {"log10", {}};
    p.norm.dyn_spec = {"piecewise-symlog", {2.0}};
    p.norm.time_spec = {"affine", {1.0}};

    p.reference_tol = ode::Tolerance(1e-24, 1e-10);
    p.benchmark_tol = ode::Tolerance(1e-20, 1e-6);
    p.rom.adaptive_tol = 2e-4;
    p.dpeak_component = -1;
    p.table_uses_l2 = false;
    return p;
}

const std::map<std::string, ParametricProblem>& registry() {
    static const auto reg = [] {
        std::map<std::string, ParametricProblem> r;
        r["vdp"] = make_vdp();
        r["orego"] = make_orego();
        r["rober"] = make_rober();
        r["e5"] = make_e5();
        r["pollu"] = make_pollu();
        return r;
    }();
    return reg;
}

}  // namespace

Vec ParametricProblem::rhs_checked(double t, const Vec& u, const Vec& mu) const {
    if (u.size() != n_state || mu.size() != n_param)
        throw std::invalid_argument(name + ": rhs dimension mismatch");
    return rhs(t, u, mu);
}

Mat ParametricProblem::jacobian_checked(double t, const Vec& u,
                                        const Vec& mu) const {
    if (u.size() != n_state || mu.size() != n_param)
        throw std::invalid_argument(name + ": jacobian dimension mismatch");
    return jacobian(t, u, mu);
}

const ParametricProblem& get(const std::string& id) {
    const auto& reg = registry();
    auto it = reg.find(id);
    if (it == reg.end()) {
        std::ostringstream os;
        os << "unknown problem id '" << id << "'; valid ids:";
        for (const auto& [k, v] : reg) os << " " << k;
        throw std::out_of_range(os.str());
    }
    return it->second;
}

std::vector<std::string> ids() {
    std::vector<std::string> out;
    for (const auto& [k, v] : registry()) out.push_back(k);
    return out;
}

ParamGrid param_grid(const std::string& id, GridRole role) {
    const auto& p = get(id);
    ParamGrid g;
    g.role = role;
    switch (role) {
        case GridRole::train: g.points = p.train_grid(); break;
        case GridRole::validation: g.points = p.validation_grid(); break;
        case GridRole::test: g.points = p.test_grid(); break;
    }
    return g;
}

}  // namespace stiffode::problems
