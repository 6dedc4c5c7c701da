#include "stiffode/dataset/savgol.hpp"

#include <stdexcept>

namespace stiffode::dataset {

Eigen::VectorXd savgol_weights(const std::vector<double>& positions, double at,
                               int order, int deriv) {
    const int m = static_cast<int>(positions.size());
    if (order >= m)
        throw std::invalid_argument("savgol: order must be below window size");
    Eigen::MatrixXd v(m, order + 1);
    for (int k = 0; k < m; ++k) {
        double pw = 1.0;
        for (int i = 0; i <= order; ++i) {
            v(k, i) = pw;
            pw *= positions[k] - at;
        }
    }
    // Row `deriv` of the pseudoinverse is the filter; the factorial accounts
    // for repeated differentiation of (x - at)^i.
    Eigen::MatrixXd pinv = (v.transpose() * v).ldlt().solve(v.transpose());
    double fact = 1.0;
    for (int i = 2; i <= deriv; ++i) fact *= i;
    return fact * pinv.row(deriv).transpose();
}

std::vector<double> savgol_derivative(const std::vector<double>& y, int window,
                                      int order) {
    const int n = static_cast<int>(y.size());
    if (window % 2 == 0) throw std::invalid_argument("savgol: window must be odd");
    if (order >= window)
        throw std::invalid_argument("savgol: order must be below window size");
    if (n < window)
        throw std::invalid_argument("savgol: series shorter than window");

    const int half = window / 2;
    std::vector<double> positions(window);
    std::vector<double> out(n);

    // Interior: centered window, one weight vector for all positions.
    for (int k = 0; k < window; ++k) positions[k] = k - half;
    const Eigen::VectorXd w_int = savgol_weights(positions, 0.0, order, 1);
    for (int i = half; i < n - half; ++i) {
        double acc = 0.0;
        for (int k = 0; k < window; ++k) acc += w_int(k) * y[i - half + k];
        out[i] = acc;
    }
    // Boundaries: one-sided windows anchored at the ends, same degree.
    for (int i = 0; i < half; ++i) {
        for (int k = 0; k < window; ++k) positions[k] = k;
        const Eigen::VectorXd w = savgol_weights(positions, i, order, 1);
        double acc = 0.0;
        for (int k = 0; k < window; ++k) acc += w(k) * y[k];
        out[i] = acc;
    }
    for (int i = n - half; i < n; ++i) {
        for (int k = 0; k < window; ++k) positions[k] = n - window + k;
        const Eigen::VectorXd w = savgol_weights(positions, i, order, 1);
        double acc = 0.0;
        for (int k = 0; k < window; ++k) acc += w(k) * y[n - window + k];
        out[i] = acc;
    }
    return out;
}

}  // namespace stiffode::dataset
