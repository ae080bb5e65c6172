#pragma once

#include "ki/core/ensemble.hpp"

namespace ki {

/**
 * Symmetric matrix intended to be positive definite (noise and prior
 * covariances). Symmetry is checked at construction to 1e-12 relative;
 * definiteness is only discovered when a factorization is attempted.
 */
class SpdMatrix {
public:
    SpdMatrix() = default;
    explicit SpdMatrix(Matrix entries);

    static SpdMatrix identity(std::size_t n);
    static SpdMatrix scaled_identity(std::size_t n, double value);
    static SpdMatrix diagonal(const Vector& diag);

    std::size_t size() const noexcept { return static_cast<std::size_t>(m_.rows()); }
    const Matrix& matrix() const noexcept { return m_; }

private:
    Matrix m_;
};

/// Lower factor L with L L^T = m. Throws NotPositiveDefinite on a pivot <= 0.
Matrix cholesky_lower(const SpdMatrix& m);

/// Symmetric square root via eigendecomposition. Eigenvalues in
/// [-1e-12 ||m||, 0] are clamped to zero; anything more negative throws.
SpdMatrix sym_sqrt(const SpdMatrix& m);

/// Solves A X = B through a Cholesky factorization; never forms A^{-1}.
Matrix spd_solve(const SpdMatrix& a, const Matrix& b);
Vector spd_solve(const SpdMatrix& a, const Vector& b);

/// Returns (m + m^T) / 2; used after updates that are symmetric only in exact arithmetic.
Matrix symmetrized(const Matrix& m);

}  // namespace ki
