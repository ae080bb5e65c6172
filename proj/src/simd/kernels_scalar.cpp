#include "ki/simd/kernels.hpp"

namespace ki::simd {

namespace {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void extrapolate(const double* cur, const double* prev, double lambda, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = cur[i] + lambda * (cur[i] - prev[i]);
}

void lorenz96_rhs(const double* x, double forcing, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double xm1 = x[(k + n - 1) % n];
        const double xm2 = x[(k + n - 2) % n];
        const double xp1 = x[(k + 1) % n];
        out[k] = -x[k] - xm1 * (xm2 - xp1) + forcing;
    }
}

void stencil5(const Stencil5& op, const double* in, double* out) {
    const std::size_t w = op.n + 2;
    for (std::size_t i = 1; i <= op.n; ++i) {
        for (std::size_t j = 1; j <= op.n; ++j) {
            const std::size_t c = i * w + j;
            out[c] = op.center[c] * in[c] - op.east[c] * in[c + 1] - op.west[c] * in[c - 1] -
                     op.north[c] * in[c + w] - op.south[c] * in[c - w];
        }
    }
}

constexpr Kernels kScalar{Isa::Scalar, dot, axpy, xpby, extrapolate, lorenz96_rhs, stencil5};

}  // namespace

const Kernels& scalar_kernels() noexcept {
    return kScalar;
}

}  // namespace ki::simd
