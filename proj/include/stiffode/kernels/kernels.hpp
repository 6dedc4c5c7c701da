#pragma once

// ============================================================================
// Data-parallel inner-loop kernels for the dense network hot path.
//
// Every kernel exists as a scalar reference implementation and, on x86-64,
// an AVX2/FMA variant. The two are equivalence-tested against each other;
// the process picks one backend at startup (see active()) and sticks with
// it, so results are reproducible within a run configuration.
//
// All matrices are column-major and densely packed (Eigen default layout).
// ============================================================================

#include <cstddef>

namespace stiffode::kernels {

enum class Activation { relu, leaky_relu, gelu, silu, hard_swish };

struct Backend {
    const char* name;

    // C = A(m x k) * B(k x n) + beta * C
    void (*gemm_nn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double beta, double* c);
    // C(m x n) = A(k x m)^T * B(k x n) + beta * C
    void (*gemm_tn)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double beta, double* c);
    // C(m x n) = A(m x k) * B(n x k)^T + beta * C
    void (*gemm_nt)(std::size_t m, std::size_t n, std::size_t k,
                    const double* a, const double* b, double beta, double* c);
    // x(:, j) += bias for every column j
    void (*bias_add)(std::size_t rows, std::size_t cols, const double* bias,
                     double* x);
    void (*act_forward)(Activation act, std::size_t n, const double* x,
                        double* y);
    // dx = dy .* act'(x), where x is the pre-activation input
    void (*act_backward)(Activation act, std::size_t n, const double* x,
                         const double* dy, double* dx);
    // Decoupled-weight-decay Adam step on a flat parameter block.
    // bias_c1 = 1/(1 - beta1^t), bias_c2 = 1/(1 - beta2^t).
    void (*adamw_update)(std::size_t n, double* param, const double* grad,
                         double* m, double* v, double lr, double beta1,
                         double beta2, double eps, double weight_decay,
                         double bias_c1, double bias_c2);
};

const Backend& scalar_backend();

#if defined(__x86_64__) || defined(_M_X64)
const Backend& avx2_backend();
bool cpu_supports_avx2();
#endif

// Backend selected once per process: the AVX2 variant when the CPU supports
// it, overridable with STIFFODE_SIMD=scalar|avx2|auto.
const Backend& active();

// Scalar activation evaluation, shared by both backends for the
// transcendental activations and used directly by gradient checks.
double act_eval(Activation act, double x);
double act_deriv(Activation act, double x);

}  // namespace stiffode::kernels
