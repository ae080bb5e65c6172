#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace ki {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Denominator used for empirical (cross-)covariances.
enum class Normalization {
    Population,  ///< 1/N
    Sample,      ///< 1/(N-1)
};

double normalization_factor(Normalization norm, std::size_t count);

/**
 * A collection of N particles in R^d, stored column-wise as a d x N matrix.
 *
 * Construction rejects empty ensembles and non-finite entries. The EKI/ETKI
 * requirement N >= 2 is enforced by the updates, not here, so that single
 * draws from a distribution are still representable.
 */
class Ensemble {
public:
    Ensemble() = default;
    explicit Ensemble(Matrix particles);

    std::size_t dim() const noexcept { return static_cast<std::size_t>(particles_.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(particles_.cols()); }

    const Matrix& particles() const noexcept { return particles_; }
    auto column(std::size_t n) const { return particles_.col(static_cast<Eigen::Index>(n)); }

    bool same_shape(const Ensemble& other) const noexcept {
        return dim() == other.dim() && size() == other.size();
    }

private:
    Matrix particles_;
};

Vector ensemble_mean(const Ensemble& e);
Vector column_mean(const Matrix& columns);

/// Columns (x_n - mean) / sqrt(normalization_factor).
Matrix anomalies(const Matrix& columns, Normalization norm);
Matrix anomalies(const Ensemble& e, Normalization norm);

/// (1/norm) * sum_n (a_n - mean a)(b_n - mean b)^T. Inputs are raw columns.
Matrix cross_cov(const Matrix& a, const Matrix& b, Normalization norm);
Matrix cross_cov(const Ensemble& a, const Matrix& b, Normalization norm);

}  // namespace ki
