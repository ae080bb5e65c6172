#include "ki/core/linalg.hpp"

#include "ki/core/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace ki {

namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kEigenClampTol = 1e-12;

Eigen::LLT<Matrix> factorize(const SpdMatrix& m) {
    Eigen::LLT<Matrix> llt(m.matrix());
    if (llt.info() != Eigen::Success) {
        throw NotPositiveDefinite("Cholesky factorization failed on a " + std::to_string(m.size()) +
                                  "x" + std::to_string(m.size()) + " matrix");
    }
    return llt;
}

}  // namespace

SpdMatrix::SpdMatrix(Matrix entries) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols()) {
        throw DimensionMismatch("SpdMatrix must be square");
    }
    if (!m_.allFinite()) {
        throw NonFiniteValue("SpdMatrix has non-finite entries");
    }
    const double scale = m_.cwiseAbs().maxCoeff();
    const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
        throw std::invalid_argument("SpdMatrix is not symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
}

SpdMatrix SpdMatrix::identity(std::size_t n) {
    return SpdMatrix(Matrix::Identity(n, n));
}

SpdMatrix SpdMatrix::scaled_identity(std::size_t n, double value) {
    return SpdMatrix(value * Matrix::Identity(n, n));
}

SpdMatrix SpdMatrix::diagonal(const Vector& diag) {
    return SpdMatrix(Matrix(diag.asDiagonal()));
}

Matrix cholesky_lower(const SpdMatrix& m) {
    // Eigen's LLT does not report a zero pivot on a PSD input reliably, so the
    // diagonal of the factor is checked as well.
    const auto llt = factorize(m);
    Matrix l = llt.matrixL();
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
        if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) {
            throw NotPositiveDefinite("Cholesky pivot " + std::to_string(i) + " is not positive");
        }
    }
    return l;
}

SpdMatrix sym_sqrt(const SpdMatrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(m.matrix());
    if (eig.info() != Eigen::Success) {
        throw NotPositiveDefinite("symmetric eigendecomposition failed");
    }
    Vector values = eig.eigenvalues();
    const double norm = values.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) < -kEigenClampTol * norm) {
            throw NotPositiveDefinite("negative eigenvalue " + std::to_string(values(i)) + " in sym_sqrt");
        }
        values(i) = std::sqrt(std::max(values(i), 0.0));
    }
    const Matrix& vecs = eig.eigenvectors();
    return SpdMatrix(symmetrized(vecs * values.asDiagonal() * vecs.transpose()));
}

Matrix spd_solve(const SpdMatrix& a, const Matrix& b) {
    if (static_cast<std::size_t>(b.rows()) != a.size()) {
        throw DimensionMismatch("spd_solve: right-hand side has " + std::to_string(b.rows()) +
                                " rows, matrix is " + std::to_string(a.size()));
    }
    return factorize(a).solve(b);
}

Vector spd_solve(const SpdMatrix& a, const Vector& b) {
    if (static_cast<std::size_t>(b.size()) != a.size()) {
        throw DimensionMismatch("spd_solve: right-hand side has length " + std::to_string(b.size()) +
                                ", matrix is " + std::to_string(a.size()));
    }
    return factorize(a).solve(b);
}

Matrix symmetrized(const Matrix& m) {
    return 0.5 * (m + m.transpose());
}

}  // namespace ki
