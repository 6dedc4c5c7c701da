#pragma once

#include <vector>

namespace stiffode::util {

/// Cumulative composite Simpson integral of samples g on a uniform grid of
/// spacing h: out[k] approximates the integral from x_0 to x_k, out[0] = 0.
/// Even prefixes are plain composite Simpson; odd prefixes close with the
/// quadratic half-panel through the last three samples (the first interval
/// uses the forward panel). Every prefix is exact for quadratic integrands.
inline void cumulative_simpson(const double* g, int n, double h, double* out) {
    out[0] = 0.0;
    if (n < 2) return;
    if (n == 2) {
        out[1] = 0.5 * h * (g[0] + g[1]);
        return;
    }
    for (int k = 1; k < n; ++k) {
        if (k == 1)
            out[1] = h / 12.0 * (5.0 * g[0] + 8.0 * g[1] - g[2]);
        else if (k % 2 == 0)
            out[k] = out[k - 2] + h / 3.0 * (g[k - 2] + 4.0 * g[k - 1] + g[k]);
        else
            out[k] =
                out[k - 1] + h / 12.0 * (-g[k - 2] + 8.0 * g[k - 1] + 5.0 * g[k]);
    }
}

inline std::vector<double> cumulative_simpson(const std::vector<double>& g,
                                              double h) {
    std::vector<double> out(g.size());
    if (!g.empty()) cumulative_simpson(g.data(), static_cast<int>(g.size()), h,
                                       out.data());
    return out;
}

/// Adjoint of cumulative_simpson: accumulates d(loss)/d(g) into dg given
/// d(loss)/d(out).
inline void cumulative_simpson_adjoint(const double* dout, int n, double h,
                                       double* dg) {
    if (n < 2) return;
    if (n == 2) {
        dg[0] += 0.5 * h * dout[1];
        dg[1] += 0.5 * h * dout[1];
        return;
    }
    std::vector<double> adj(dout, dout + n);
    for (int k = n - 1; k >= 1; --k) {
        if (k == 1) {
            dg[0] += adj[1] * 5.0 * h / 12.0;
            dg[1] += adj[1] * 8.0 * h / 12.0;
            dg[2] -= adj[1] * h / 12.0;
        } else if (k % 2 == 0) {
            adj[k - 2] += adj[k];
            dg[k - 2] += adj[k] * h / 3.0;
            dg[k - 1] += adj[k] * 4.0 * h / 3.0;
            dg[k] += adj[k] * h / 3.0;
        } else {
            adj[k - 1] += adj[k];
            dg[k - 2] -= adj[k] * h / 12.0;
            dg[k - 1] += adj[k] * 8.0 * h / 12.0;
            dg[k] += adj[k] * 5.0 * h / 12.0;
        }
    }
}

/// Composite Simpson value of the full interval (non-cumulative), via the
/// same prefix rule.
inline double simpson_integral(const std::vector<double>& g, double h) {
    if (g.size() < 2) return 0.0;
    std::vector<double> out = cumulative_simpson(g, h);
    return out.back();
}

}  // namespace stiffode::util
