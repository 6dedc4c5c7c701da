// POLLU: chemical reaction part of the Dutch RIVM air pollution model.
// 20 reacting compounds coupled through 25 reactions.

#include "stiffode/problems/problems.hpp"

#include "stiffode/util/fmt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace stiffode::problems {

namespace {

// Reaction j is mu_j * u[a] (* u[b] when b >= 0); indices 0-based.
struct Reaction {
    int a;
    int b;
};

constexpr std::array<Reaction, 25> kReactions{{
    {0, -1},  // r1  = mu1  u1
    {1, 3},   // r2  = mu2  u2 u4
    {4, 1},   // r3  = mu3  u5 u2
    {6, -1},  // r4  = mu4  u7
    {6, -1},  // r5  = mu5  u7
    {6, 5},   // r6  = mu6  u7 u6
    {8, -1},  // r7  = mu7  u9
    {8, 5},   // r8  = mu8  u9 u6
    {10, 1},  // r9  = mu9  u11 u2
    {10, 0},  // r10 = mu10 u11 u1
    {12, -1}, // r11 = mu11 u13
    {9, 1},   // r12 = mu12 u10 u2
    {13, -1}, // r13 = mu13 u14
    {0, 5},   // r14 = mu14 u1 u6
    {2, -1},  // r15 = mu15 u3
    {3, -1},  // r16 = mu16 u4
    {3, -1},  // r17 = mu17 u4
    {15, -1}, // r18 = mu18 u16
    {15, -1}, // r19 = mu19 u16
    {16, 5},  // r20 = mu20 u17 u6
    {18, -1}, // r21 = mu21 u19
    {18, -1}, // r22 = mu22 u19
    {0, 3},   // r23 = mu23 u1 u4
    {18, 0},  // r24 = mu24 u19 u1
    {19, -1}, // r25 = mu25 u20
}};

struct Term {
    int row;       // state component, 0-based
    int reaction;  // 0-based
    double coeff;
};

const std::vector<Term>& terms() {
    static const std::vector<Term> t = [] {
        std::vector<Term> v;
        auto add = [&v](int row1, std::initializer_list<int> minus,
                        std::initializer_list<int> plus,
                        std::initializer_list<std::pair<int, double>> extra = {}) {
            for (int r : minus) v.push_back({row1 - 1, r - 1, -1.0});
            for (int r : plus) v.push_back({row1 - 1, r - 1, 1.0});
            for (auto [r, c] : extra) v.push_back({row1 - 1, r - 1, c});
        };
        add(1, {1, 10, 14, 23, 24}, {2, 3, 9, 11, 12, 22, 25});
        add(2, {2, 3, 9, 12}, {1, 21});
        add(3, {15}, {1, 17, 19, 22});
        add(4, {2, 16, 17, 23}, {15});
        add(5, {3}, {6, 7, 13, 20}, {{4, 2.0}});
        add(6, {6, 8, 14, 20}, {3}, {{18, 2.0}});
        add(7, {4, 5, 6}, {13});
        add(8, {}, {4, 5, 6, 7});
        add(9, {7, 8}, {});
        add(10, {12}, {7, 9});
        add(11, {9, 10}, {8, 11});
        add(12, {}, {9});
        add(13, {11}, {10});
        add(14, {13}, {12});
        add(15, {}, {14});
        add(16, {18, 19}, {16});
        add(17, {20}, {});
        add(18, {}, {20});
        add(19, {21, 22, 24}, {23, 25});
        add(20, {25}, {24});
        return v;
    }();
    return t;
}

constexpr std::array<double, 25> kMu0{
    0.350e0,  0.266e2,  0.120e5,  0.860e-3, 0.820e-3, 0.150e5,  0.130e-3,
    0.240e5,  0.165e5,  0.900e4,  0.220e-1, 0.120e5,  0.188e1,  0.163e5,
    0.480e7,  0.350e-3, 0.175e-1, 0.100e9,  0.444e12, 0.124e4,  0.210e1,
    0.578e1,  0.474e-1, 0.178e4,  0.312e1};

constexpr std::array<int, 3> kVarying{3, 5, 13};  // components 4, 6, 14

std::array<double, 25> rates(const Vec& u, const Vec& mu) {
    std::array<double, 25> r;
    for (int j = 0; j < 25; ++j) {
        const auto& rx = kReactions[j];
        r[j] = mu(j) * u(rx.a) * (rx.b >= 0 ? u(rx.b) : 1.0);
    }
    return r;
}

}  // namespace

const std::array<double, 25>& pollu_reference_rates() { return kMu0; }

std::vector<std::string> pollu_rate_factors() {
    std::vector<std::string> out;
    for (const auto& rx : kReactions) {
        std::string s = "u" + std::to_string(rx.a + 1);
        if (rx.b >= 0) s += "*u" + std::to_string(rx.b + 1);
        out.push_back(s);
    }
    return out;
}

void write_pollu_rates_csv(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path);
    os << "reaction,rate,mu0\n";
    const auto factors = pollu_rate_factors();
    for (int j = 0; j < 25; ++j)
        os << j + 1 << ",mu" << j + 1 << "*" << factors[j] << ","
           << util::format_g17(kMu0[j]) << "\n";
}

ParametricProblem make_pollu() {
    ParametricProblem p;
    p.name = "pollu";
    p.n_state = 20;
    p.n_param = 25;
    p.horizon = [](const Vec&) { return 60.0; };
    p.initial_state = [](const Vec&) {
        Vec u = Vec::Zero(20);
        u(1) = 0.2;
        u(3) = 0.04;
        u(6) = 0.1;
        u(7) = 0.3;
        u(8) = 0.01;
        u(16) = 0.007;
        return u;
    };
    p.rhs = [](double, const Vec& u, const Vec& mu) {
        const auto r = rates(u, mu);
        Vec f = Vec::Zero(20);
        for (const auto& t : terms()) f(t.row) += t.coeff * r[t.reaction];
        return f;
    };
    p.jacobian = [](double, const Vec& u, const Vec& mu) {
        Mat j = Mat::Zero(20, 20);
        for (const auto& t : terms()) {
            const auto& rx = kReactions[t.reaction];
            const double k = mu(t.reaction);
            if (rx.b >= 0) {
                j(t.row, rx.a) += t.coeff * k * u(rx.b);
                j(t.row, rx.b) += t.coeff * k * u(rx.a);
            } else {
                j(t.row, rx.a) += t.coeff * k;
            }
        }
        return j;
    };
    for (int i = 0; i < 25; ++i) {
        const bool varies =
            std::find(kVarying.begin(), kVarying.end(), i) != kVarying.end();
        p.param_space.emplace_back(varies ? 0.5 * kMu0[i] : kMu0[i],
                                   varies ? 2.0 * kMu0[i] : kMu0[i]);
    }

    auto grid_from_axes = [](const std::array<std::vector<double>, 3>& axes) {
        std::vector<Vec> out;
        for (double a : axes[0])
            for (double b : axes[1])
                for (double c : axes[2]) {
                    Vec mu(25);
                    for (int i = 0; i < 25; ++i) mu(i) = kMu0[i];
                    mu(kVarying[0]) = a;
                    mu(kVarying[1]) = b;
                    mu(kVarying[2]) = c;
                    out.push_back(mu);
                }
        return out;
    };
    auto train_axes = [] {
        std::array<std::vector<double>, 3> axes;
        for (int d = 0; d < 3; ++d)
            axes[d] = linspace(0.5 * kMu0[kVarying[d]], 2.0 * kMu0[kVarying[d]], 16);
        return axes;
    };
    p.train_grid = [=] { return grid_from_axes(train_axes()); };
    p.validation_grid = [=] {
        auto axes = train_axes();
        for (auto& ax : axes) ax = arithmetic_midpoints(ax);
        return grid_from_axes(axes);
    };
    p.test_grid = [=] {
        std::vector<Vec> out;
        for (double s : {0.525, 1.975}) {
            Vec mu(25);
            for (int i = 0; i < 25; ++i) mu(i) = kMu0[i];
            for (int d : kVarying) mu(d) = s * kMu0[d];
            out.push_back(mu);
        }
        return out;
    };

    p.norm.state_fwd = [](const Vec& u, const Vec&) { return u; };
    p.norm.state_inv = [](const Vec& v, const Vec&) { return v; };
    p.norm.param_fwd = [](const Vec& mu) {
        Vec m(25);
        for (int i = 0; i < 25; ++i) m(i) = mu(i) / kMu0[i];
        return m;
    };
    p.norm.param_inv = [](const Vec& m) {
        Vec mu(25);
        for (int i = 0; i < 25; ++i) mu(i) = m(i) * kMu0[i];
        return mu;
    };
    p.norm.dyn_fwd = [](const Vec& f, const Vec&) { return f; };
    p.norm.dyn_inv = [](const Vec& f, const Vec&) { return f; };
    p.norm.time_scale = [](const Vec&) { return 1.0; };
    p.norm.state_spec = {"affine", {1.0}};
    p.norm.param_spec = {"affine", {}};
    p.norm.dyn_spec = {"affine", {1.0}};
    p.norm.time_spec = {"affine", {1.0}};

    p.reference_tol = ode::Tolerance(1e-10, 1e-10);
    p.benchmark_tol = ode::Tolerance(1e-3, 1e-3);
    p.rom.adaptive_tol = 1e-4;
    p.dpeak_component = -1;
    p.l2_components = {};
    p.table_uses_l2 = true;
    return p;
}

}  // namespace stiffode::problems
