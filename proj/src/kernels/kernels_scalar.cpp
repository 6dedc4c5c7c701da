#include "stiffode/kernels/kernels.hpp"

#include <cmath>

namespace stiffode::kernels {

namespace {
constexpr double kLeakySlope = 0.01;
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
}  // namespace

double act_eval(Activation act, double x) {
    switch (act) {
        case Activation::relu:
            return x > 0.0 ? x : 0.0;
        case Activation::leaky_relu:
            return x > 0.0 ? x : kLeakySlope * x;
        case Activation::gelu:
            // Exact Gaussian-CDF form.
            return 0.5 * x * (1.0 + std::erf(x * kInvSqrt2));
        case Activation::silu:
            return x / (1.0 + std::exp(-x));
        case Activation::hard_swish:
            if (x <= -3.0) return 0.0;
            if (x >= 3.0) return x;
            return x * (x + 3.0) / 6.0;
    }
    return 0.0;
}

double act_deriv(Activation act, double x) {
    switch (act) {
        case Activation::relu:
            // Subgradient 0 exactly at the kink.
            return x > 0.0 ? 1.0 : 0.0;
        case Activation::leaky_relu:
            if (x == 0.0) return 0.0;
            return x > 0.0 ? 1.0 : kLeakySlope;
        case Activation::gelu: {
            const double cdf = 0.5 * (1.0 + std::erf(x * kInvSqrt2));
            const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
            return cdf + x * pdf;
        }
        case Activation::silu: {
            const double s = 1.0 / (1.0 + std::exp(-x));
            return s * (1.0 + x * (1.0 - s));
        }
        case Activation::hard_swish:
            if (x <= -3.0) return 0.0;
            if (x >= 3.0) return 1.0;
            return (2.0 * x + 3.0) / 6.0;
    }
    return 0.0;
}

namespace scalar {

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        if (beta == 0.0) {
            for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
        } else if (beta != 1.0) {
            for (std::size_t i = 0; i < m; ++i) cj[i] *= beta;
        }
        const double* bj = b + j * k;
        for (std::size_t l = 0; l < k; ++l) {
            const double blj = bj[l];
            const double* al = a + l * m;
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    // c(i,j) = sum_l a(l,i) * b(l,j); columns of a and b are contiguous.
    for (std::size_t j = 0; j < n; ++j) {
        const double* bj = b + j * k;
        double* cj = c + j * m;
        for (std::size_t i = 0; i < m; ++i) {
            const double* ai = a + i * k;
            double acc = 0.0;
            for (std::size_t l = 0; l < k; ++l) acc += ai[l] * bj[l];
            cj[i] = beta == 0.0 ? acc : beta * cj[i] + acc;
        }
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    // c(i,j) = sum_l a(i,l) * b(j,l)
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        if (beta == 0.0) {
            for (std::size_t i = 0; i < m; ++i) cj[i] = 0.0;
        } else if (beta != 1.0) {
            for (std::size_t i = 0; i < m; ++i) cj[i] *= beta;
        }
        for (std::size_t l = 0; l < k; ++l) {
            const double bjl = b[l * n + j];
            const double* al = a + l * m;
            for (std::size_t i = 0; i < m; ++i) cj[i] += al[i] * bjl;
        }
    }
}

void bias_add(std::size_t rows, std::size_t cols, const double* bias,
              double* x) {
    for (std::size_t j = 0; j < cols; ++j) {
        double* xj = x + j * rows;
        for (std::size_t i = 0; i < rows; ++i) xj[i] += bias[i];
    }
}

void act_forward(Activation act, std::size_t n, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) y[i] = act_eval(act, x[i]);
}

void act_backward(Activation act, std::size_t n, const double* x,
                  const double* dy, double* dx) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * act_deriv(act, x[i]);
}

void adamw_update(std::size_t n, double* param, const double* grad, double* m,
                  double* v, double lr, double beta1, double beta2, double eps,
                  double weight_decay, double bias_c1, double bias_c2) {
    for (std::size_t i = 0; i < n; ++i) {
        const double g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double mhat = m[i] * bias_c1;
        const double vhat = v[i] * bias_c2;
        param[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * param[i]);
    }
}

}  // namespace scalar

const Backend& scalar_backend() {
    static const Backend backend{
        "scalar",          scalar::gemm_nn,     scalar::gemm_tn,
        scalar::gemm_nt,   scalar::bias_add,    scalar::act_forward,
        scalar::act_backward, scalar::adamw_update,
    };
    return backend;
}

}  // namespace stiffode::kernels
