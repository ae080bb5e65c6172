// Compiled with -mavx2 -mfma. Nothing here may run before cpu_supports(Avx2).

#include "ki/simd/kernels.hpp"

#include <immintrin.h>

namespace ki::simd {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    }
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    const __m256d vb = _mm256_set1_pd(beta);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(vb, _mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
    }
    for (; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void extrapolate(const double* cur, const double* prev, double lambda, double* out, std::size_t n) {
    const __m256d vl = _mm256_set1_pd(lambda);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d c = _mm256_loadu_pd(cur + i);
        const __m256d diff = _mm256_sub_pd(c, _mm256_loadu_pd(prev + i));
        _mm256_storeu_pd(out + i, _mm256_fmadd_pd(vl, diff, c));
    }
    for (; i < n; ++i) out[i] = cur[i] + lambda * (cur[i] - prev[i]);
}

inline double l96_point(const double* x, double forcing, std::size_t k, std::size_t n) {
    const double xm1 = x[(k + n - 1) % n];
    const double xm2 = x[(k + n - 2) % n];
    const double xp1 = x[(k + 1) % n];
    return -x[k] - xm1 * (xm2 - xp1) + forcing;
}

void lorenz96_rhs(const double* x, double forcing, double* out, std::size_t n) {
    // k in [2, n-1) has all neighbours in range without wrap-around.
    out[0] = l96_point(x, forcing, 0, n);
    out[1] = l96_point(x, forcing, 1, n);
    const __m256d vf = _mm256_set1_pd(forcing);
    std::size_t k = 2;
    for (; k + 4 <= n - 1; k += 4) {
        const __m256d xk = _mm256_loadu_pd(x + k);
        const __m256d xm1 = _mm256_loadu_pd(x + k - 1);
        const __m256d xm2 = _mm256_loadu_pd(x + k - 2);
        const __m256d xp1 = _mm256_loadu_pd(x + k + 1);
        const __m256d adv = _mm256_mul_pd(xm1, _mm256_sub_pd(xm2, xp1));
        _mm256_storeu_pd(out + k, _mm256_sub_pd(_mm256_sub_pd(vf, xk), adv));
    }
    for (; k < n; ++k) out[k] = l96_point(x, forcing, k, n);
}

void stencil5(const Stencil5& op, const double* in, double* out) {
    const std::size_t w = op.n + 2;
    for (std::size_t i = 1; i <= op.n; ++i) {
        const std::size_t row = i * w;
        std::size_t j = 1;
        for (; j + 4 <= op.n + 1; j += 4) {
            const std::size_t c = row + j;
            __m256d acc = _mm256_mul_pd(_mm256_loadu_pd(op.center + c), _mm256_loadu_pd(in + c));
            acc = _mm256_fnmadd_pd(_mm256_loadu_pd(op.east + c), _mm256_loadu_pd(in + c + 1), acc);
            acc = _mm256_fnmadd_pd(_mm256_loadu_pd(op.west + c), _mm256_loadu_pd(in + c - 1), acc);
            acc = _mm256_fnmadd_pd(_mm256_loadu_pd(op.north + c), _mm256_loadu_pd(in + c + w), acc);
            acc = _mm256_fnmadd_pd(_mm256_loadu_pd(op.south + c), _mm256_loadu_pd(in + c - w), acc);
            _mm256_storeu_pd(out + c, acc);
        }
        for (; j <= op.n; ++j) {
            const std::size_t c = row + j;
            out[c] = op.center[c] * in[c] - op.east[c] * in[c + 1] - op.west[c] * in[c - 1] -
                     op.north[c] * in[c + w] - op.south[c] * in[c - w];
        }
    }
}

constexpr Kernels kAvx2{Isa::Avx2, dot, axpy, xpby, extrapolate, lorenz96_rhs, stencil5};

}  // namespace

const Kernels* avx2_kernels() noexcept {
    return &kAvx2;
}

}  // namespace ki::simd
