#pragma once

// Data-parallel inner loops behind a dispatch table. Every kernel has a scalar
// reference implementation; the AVX2+FMA variants are compiled in a separate
// translation unit and selected at runtime when the CPU reports support.
// Setting KI_SIMD=scalar in the environment forces the reference path.

#include <cstddef>
#include <string_view>

namespace ki::simd {

enum class Isa { Scalar, Avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Five-point operator on an n x n interior grid stored with a one-node halo,
/// i.e. row-major arrays of (n+2)^2 entries. Only interior entries are read
/// from the coefficient arrays and only interior entries of `out` are written.
struct Stencil5 {
    std::size_t n = 0;
    const double* center = nullptr;
    const double* east = nullptr;
    const double* west = nullptr;
    const double* north = nullptr;
    const double* south = nullptr;
};

struct Kernels {
    Isa isa;
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// y = x + beta * y
    void (*xpby)(const double* x, double beta, double* y, std::size_t n);
    /// out = cur + lambda * (cur - prev)
    void (*extrapolate)(const double* cur, const double* prev, double lambda, double* out, std::size_t n);
    /// out_k = -x_k - x_{k-1}(x_{k-2} - x_{k+1}) + forcing, cyclic; n >= 4
    void (*lorenz96_rhs)(const double* x, double forcing, double* out, std::size_t n);
    /// out_c = center*in_c - east*in_{c+1} - west*in_{c-1} - north*in_{c+W} - south*in_{c-W}
    void (*stencil5)(const Stencil5& op, const double* in, double* out);
};

const Kernels& scalar_kernels() noexcept;

/// nullptr when the AVX2 variant was not compiled for this target.
const Kernels* avx2_kernels() noexcept;

bool cpu_supports(Isa isa) noexcept;

/// Table chosen once per process (best supported ISA unless KI_SIMD=scalar).
const Kernels& active() noexcept;

}  // namespace ki::simd
