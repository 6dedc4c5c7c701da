#include "stiffode/ode/radau.hpp"
#include "stiffode/ode/solvers.hpp"
#include <cstdio>
using namespace stiffode::ode;
int main() {
    // u' = -u
    Rhs f = [](double, const Vec& u) { return Vec(-u); };
    Jacobian j = [](double, const Vec& u) { Mat m(1,1); m(0,0) = -1.0; return m; };
    Vec u0(1); u0 << 1.0;
    auto r = radau_solve(f, j, u0, 0.0, 1.0, Tolerance(1e-10, 1e-10));
    std::printf("radau: status=%d err=%.3e fev=%ld jev=%ld lu=%ld acc=%ld rej=%ld\n",
        (int)r.status, std::abs(r.trajectory.states.back()(0) - std::exp(-1.0)),
        (long)r.stats.n_fev, (long)r.stats.n_jev, (long)r.stats.n_lu,
        (long)r.stats.n_steps_accepted, (long)r.stats.n_steps_rejected);
    auto a = solve_adaptive(f, u0, 0.0, 1.0, Tolerance(1e-6,1e-6), dopri54());
    std::printf("dopri: status=%d err=%.3e fev=%ld acc=%ld rej=%ld\n",
        (int)a.status, std::abs(a.trajectory.states.back()(0) - std::exp(-1.0)),
        (long)a.stats.n_fev, (long)a.stats.n_steps_accepted, (long)a.stats.n_steps_rejected);
    // stiff linear lambda=-1e6
    Rhs fs = [](double, const Vec& u) { return Vec(-1e6*u); };
    Jacobian js = [](double, const Vec&) { Mat m(1,1); m(0,0) = -1e6; return m; };
    auto rs = radau_solve(fs, js, u0, 0.0, 1.0, Tolerance(1e-6,1e-6));
    std::printf("radau stiff: status=%d u(1)=%.3e fev=%ld acc=%ld\n",
        (int)rs.status, rs.trajectory.states.back()(0), (long)rs.stats.n_fev,
        (long)rs.stats.n_steps_accepted);
    return 0;
}
