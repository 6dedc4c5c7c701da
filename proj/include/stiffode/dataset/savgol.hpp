#pragma once

#include <Eigen/Dense>

#include <vector>

namespace stiffode::dataset {

/// Least-squares polynomial filter weights: fit a polynomial of degree
/// `order` through samples at relative `positions`, evaluate derivative
/// number `deriv` (0 = value, 1 = slope) at offset `at`.
Eigen::VectorXd savgol_weights(const std::vector<double>& positions, double at,
                               int order, int deriv);

/// First-derivative estimate of y on a unit-spaced grid. Interior points use
/// a centered window of size `window` (odd) and fit degree `order`; boundary
/// points use one-sided windows of the same degree. Scale by 1/h afterwards
/// for grid spacing h. Throws when window is even, order >= window, or the
/// series is shorter than the window.
std::vector<double> savgol_derivative(const std::vector<double>& y, int window,
                                      int order);

}  // namespace stiffode::dataset
