#include "stiffode/ode/tableau.hpp"

#include <cmath>
#include <stdexcept>

namespace stiffode::ode {

bool ButcherTableau::is_explicit() const {
    for (int i = 0; i < stages; ++i)
        for (int j = i; j < stages; ++j)
            if (a(i, j) != 0.0) return false;
    return true;
}

void ButcherTableau::validate() const {
    if (stages <= 0 || a.rows() != stages || a.cols() != stages ||
        b.size() != stages || c.size() != stages)
        throw std::invalid_argument("tableau: inconsistent dimensions");
    if (b_star && b_star->size() != stages)
        throw std::invalid_argument("tableau: embedded weights size mismatch");
    if (order <= 0) throw std::invalid_argument("tableau: order must be positive");
    if (std::abs(b.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("tableau: sum(b) != 1");
    if (is_explicit()) {
        for (int i = 0; i < stages; ++i) {
            double row = 0.0;
            for (int j = 0; j < i; ++j) row += a(i, j);
            if (std::abs(row - c(i)) > 1e-12)
                throw std::invalid_argument("tableau: c_i != sum_j<i a_ij");
        }
    }
}

const ButcherTableau& rk4_classic() {
    static const ButcherTableau t = [] {
        ButcherTableau t;
        t.stages = 4;
        t.a = Mat::Zero(4, 4);
        t.a(1, 0) = 0.5;
        t.a(2, 1) = 0.5;
        t.a(3, 2) = 1.0;
        t.b = Vec(4);
        t.b << 1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6;
        t.c = Vec(4);
        t.c << 0.0, 0.5, 0.5, 1.0;
        t.order = 4;
        t.error_order = 3;
        t.validate();
        return t;
    }();
    return t;
}

const ButcherTableau& dopri54() {
    static const ButcherTableau t = [] {
        ButcherTableau t;
        t.stages = 7;
        t.a = Mat::Zero(7, 7);
        t.a(1, 0) = 1.0 / 5;
        t.a(2, 0) = 3.0 / 40;
        t.a(2, 1) = 9.0 / 40;
        t.a(3, 0) = 44.0 / 45;
        t.a(3, 1) = -56.0 / 15;
        t.a(3, 2) = 32.0 / 9;
        t.a(4, 0) = 19372.0 / 6561;
        t.a(4, 1) = -25360.0 / 2187;
        t.a(4, 2) = 64448.0 / 6561;
        t.a(4, 3) = -212.0 / 729;
        t.a(5, 0) = 9017.0 / 3168;
        t.a(5, 1) = -355.0 / 33;
        t.a(5, 2) = 46732.0 / 5247;
        t.a(5, 3) = 49.0 / 176;
        t.a(5, 4) = -5103.0 / 18656;
        t.a(6, 0) = 35.0 / 384;
        t.a(6, 2) = 500.0 / 1113;
        t.a(6, 3) = 125.0 / 192;
        t.a(6, 4) = -2187.0 / 6784;
        t.a(6, 5) = 11.0 / 84;
        t.b = Vec(7);
        t.b << 35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
            11.0 / 84, 0.0;
        Vec bs(7);
        bs << 5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640,
            -92097.0 / 339200, 187.0 / 2100, 1.0 / 40;
        t.b_star = bs;
        t.c = Vec(7);
        t.c << 0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0;
        t.order = 5;
        t.error_order = 4;
        t.validate();
        return t;
    }();
    return t;
}

const ButcherTableau& zonneveld43() {
    static const ButcherTableau t = [] {
        ButcherTableau t;
        t.stages = 5;
        t.a = Mat::Zero(5, 5);
        t.a(1, 0) = 0.5;
        t.a(2, 1) = 0.5;
        t.a(3, 2) = 1.0;
        t.a(4, 0) = 5.0 / 32;
        t.a(4, 1) = 7.0 / 32;
        t.a(4, 2) = 13.0 / 32;
        t.a(4, 3) = -1.0 / 32;
        t.b = Vec(5);
        t.b << 1.0 / 6, 1.0 / 3, 1.0 / 3, 1.0 / 6, 0.0;
        Vec bs(5);
        bs << -0.5, 7.0 / 3, 7.0 / 3, 13.0 / 6, -16.0 / 3;
        t.b_star = bs;
        t.c = Vec(5);
        t.c << 0.0, 0.5, 0.5, 1.0, 0.75;
        t.order = 4;
        t.error_order = 3;
        t.validate();
        return t;
    }();
    return t;
}

}  // namespace stiffode::ode
