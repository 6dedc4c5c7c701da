// AVX2/FMA variants of the dense-network kernels. This translation unit is
// compiled with -mavx2 -mfma and must only be entered after the runtime
// dispatch has confirmed CPU support.

#include "stiffode/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace stiffode::kernels {
namespace avx2 {

inline void scale_column(double* c, std::size_t m, double beta) {
    if (beta == 0.0) {
        std::size_t i = 0;
        const __m256d z = _mm256_setzero_pd();
        for (; i + 4 <= m; i += 4) _mm256_storeu_pd(c + i, z);
        for (; i < m; ++i) c[i] = 0.0;
    } else if (beta != 1.0) {
        const __m256d vb = _mm256_set1_pd(beta);
        std::size_t i = 0;
        for (; i + 4 <= m; i += 4)
            _mm256_storeu_pd(c + i, _mm256_mul_pd(_mm256_loadu_pd(c + i), vb));
        for (; i < m; ++i) c[i] *= beta;
    }
}

void gemm_nn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        scale_column(cj, m, beta);
        const double* bj = b + j * k;
        for (std::size_t l = 0; l < k; ++l) {
            const __m256d vb = _mm256_set1_pd(bj[l]);
            const double* al = a + l * m;
            std::size_t i = 0;
            for (; i + 4 <= m; i += 4) {
                __m256d vc = _mm256_loadu_pd(cj + i);
                vc = _mm256_fmadd_pd(_mm256_loadu_pd(al + i), vb, vc);
                _mm256_storeu_pd(cj + i, vc);
            }
            for (; i < m; ++i) cj[i] += al[i] * bj[l];
        }
    }
}

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

void gemm_tn(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    for (std::size_t j = 0; j < n; ++j) {
        const double* bj = b + j * k;
        double* cj = c + j * m;
        for (std::size_t i = 0; i < m; ++i) {
            const double* ai = a + i * k;
            __m256d vacc = _mm256_setzero_pd();
            std::size_t l = 0;
            for (; l + 4 <= k; l += 4)
                vacc = _mm256_fmadd_pd(_mm256_loadu_pd(ai + l),
                                       _mm256_loadu_pd(bj + l), vacc);
            double acc = hsum(vacc);
            for (; l < k; ++l) acc += ai[l] * bj[l];
            cj[i] = beta == 0.0 ? acc : beta * cj[i] + acc;
        }
    }
}

void gemm_nt(std::size_t m, std::size_t n, std::size_t k, const double* a,
             const double* b, double beta, double* c) {
    for (std::size_t j = 0; j < n; ++j) {
        double* cj = c + j * m;
        scale_column(cj, m, beta);
        for (std::size_t l = 0; l < k; ++l) {
            const __m256d vb = _mm256_set1_pd(b[l * n + j]);
            const double* al = a + l * m;
            std::size_t i = 0;
            for (; i + 4 <= m; i += 4) {
                __m256d vc = _mm256_loadu_pd(cj + i);
                vc = _mm256_fmadd_pd(_mm256_loadu_pd(al + i), vb, vc);
                _mm256_storeu_pd(cj + i, vc);
            }
            for (; i < m; ++i) cj[i] += al[i] * b[l * n + j];
        }
    }
}

void bias_add(std::size_t rows, std::size_t cols, const double* bias,
              double* x) {
    for (std::size_t j = 0; j < cols; ++j) {
        double* xj = x + j * rows;
        std::size_t i = 0;
        for (; i + 4 <= rows; i += 4)
            _mm256_storeu_pd(xj + i, _mm256_add_pd(_mm256_loadu_pd(xj + i),
                                                   _mm256_loadu_pd(bias + i)));
        for (; i < rows; ++i) xj[i] += bias[i];
    }
}

void act_forward(Activation act, std::size_t n, const double* x, double* y) {
    switch (act) {
        case Activation::relu: {
            const __m256d z = _mm256_setzero_pd();
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4)
                _mm256_storeu_pd(y + i, _mm256_max_pd(_mm256_loadu_pd(x + i), z));
            for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.0;
            return;
        }
        case Activation::leaky_relu: {
            const __m256d slope = _mm256_set1_pd(0.01);
            const __m256d z = _mm256_setzero_pd();
            std::size_t i = 0;
            for (; i + 4 <= n; i += 4) {
                const __m256d vx = _mm256_loadu_pd(x + i);
                const __m256d neg = _mm256_mul_pd(vx, slope);
                const __m256d mask = _mm256_cmp_pd(vx, z, _CMP_GT_OQ);
                _mm256_storeu_pd(y + i, _mm256_blendv_pd(neg, vx, mask));
            }
            for (; i < n; ++i) y[i] = x[i] > 0.0 ? x[i] : 0.01 * x[i];
            return;
        }
        default:
            // erf/exp based activations stay on the shared scalar path so
            // both backends agree bit-for-bit.
            for (std::size_t i = 0; i < n; ++i) y[i] = act_eval(act, x[i]);
    }
}

void act_backward(Activation act, std::size_t n, const double* x,
                  const double* dy, double* dx) {
    for (std::size_t i = 0; i < n; ++i) dx[i] = dy[i] * act_deriv(act, x[i]);
}

void adamw_update(std::size_t n, double* param, const double* grad, double* m,
                  double* v, double lr, double beta1, double beta2, double eps,
                  double weight_decay, double bias_c1, double bias_c2) {
    const __m256d vb1 = _mm256_set1_pd(beta1);
    const __m256d vb1c = _mm256_set1_pd(1.0 - beta1);
    const __m256d vb2 = _mm256_set1_pd(beta2);
    const __m256d vb2c = _mm256_set1_pd(1.0 - beta2);
    const __m256d vc1 = _mm256_set1_pd(bias_c1);
    const __m256d vc2 = _mm256_set1_pd(bias_c2);
    const __m256d veps = _mm256_set1_pd(eps);
    const __m256d vlr = _mm256_set1_pd(lr);
    const __m256d vwd = _mm256_set1_pd(weight_decay);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d g = _mm256_loadu_pd(grad + i);
        __m256d vm = _mm256_loadu_pd(m + i);
        __m256d vv = _mm256_loadu_pd(v + i);
        vm = _mm256_fmadd_pd(vb1, vm, _mm256_mul_pd(vb1c, g));
        vv = _mm256_fmadd_pd(vb2, vv, _mm256_mul_pd(vb2c, _mm256_mul_pd(g, g)));
        _mm256_storeu_pd(m + i, vm);
        _mm256_storeu_pd(v + i, vv);
        const __m256d mhat = _mm256_mul_pd(vm, vc1);
        const __m256d vhat = _mm256_mul_pd(vv, vc2);
        const __m256d denom = _mm256_add_pd(_mm256_sqrt_pd(vhat), veps);
        __m256d p = _mm256_loadu_pd(param + i);
        const __m256d step =
            _mm256_add_pd(_mm256_div_pd(mhat, denom), _mm256_mul_pd(vwd, p));
        p = _mm256_fnmadd_pd(vlr, step, p);
        _mm256_storeu_pd(param + i, p);
    }
    for (; i < n; ++i) {
        const double g = grad[i];
        m[i] = beta1 * m[i] + (1.0 - beta1) * g;
        v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
        const double mhat = m[i] * bias_c1;
        const double vhat = v[i] * bias_c2;
        param[i] -= lr * (mhat / (std::sqrt(vhat) + eps) + weight_decay * param[i]);
    }
}

}  // namespace avx2

const Backend& avx2_backend() {
    static const Backend backend{
        "avx2",          avx2::gemm_nn,     avx2::gemm_tn,
        avx2::gemm_nt,   avx2::bias_add,    avx2::act_forward,
        avx2::act_backward, avx2::adamw_update,
    };
    return backend;
}

bool cpu_supports_avx2() {
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

}  // namespace stiffode::kernels

#endif  // x86-64
