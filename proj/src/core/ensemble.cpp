#include "ki/core/ensemble.hpp"

#include "ki/core/errors.hpp"

#include <cmath>
#include <string>

namespace ki {

double normalization_factor(Normalization norm, std::size_t count) {
    if (norm == Normalization::Sample) {
        if (count < 2) {
            throw std::invalid_argument("sample normalization needs at least two columns");
        }
        return static_cast<double>(count - 1);
    }
    if (count < 1) {
        throw std::invalid_argument("normalization of an empty ensemble");
    }
    return static_cast<double>(count);
}

Ensemble::Ensemble(Matrix particles) : particles_(std::move(particles)) {
    if (particles_.rows() == 0 || particles_.cols() == 0) {
        throw std::invalid_argument("ensemble must have at least one particle of positive dimension");
    }
    if (!particles_.allFinite()) {
        throw NonFiniteValue("ensemble contains non-finite entries");
    }
}

Vector column_mean(const Matrix& columns) {
    return columns.rowwise().mean();
}

Vector ensemble_mean(const Ensemble& e) {
    return column_mean(e.particles());
}

Matrix anomalies(const Matrix& columns, Normalization norm) {
    const double scale = 1.0 / std::sqrt(normalization_factor(norm, columns.cols()));
    return (columns.colwise() - column_mean(columns)) * scale;
}

Matrix anomalies(const Ensemble& e, Normalization norm) {
    return anomalies(e.particles(), norm);
}

Matrix cross_cov(const Matrix& a, const Matrix& b, Normalization norm) {
    if (a.cols() != b.cols()) {
        throw DimensionMismatch("cross_cov: ensembles have " + std::to_string(a.cols()) + " and " +
                                std::to_string(b.cols()) + " members");
    }
    const Matrix da = a.colwise() - column_mean(a);
    const Matrix db = b.colwise() - column_mean(b);
    return (da * db.transpose()) / normalization_factor(norm, a.cols());
}

Matrix cross_cov(const Ensemble& a, const Matrix& b, Normalization norm) {
    return cross_cov(a.particles(), b, norm);
}

}  // namespace ki
