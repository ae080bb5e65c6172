#include "ki/models/forward_model.hpp"

#include "ki/core/errors.hpp"

namespace ki {

Matrix evaluate_columns(const ForwardModel& model, const Matrix& columns) {
    if (static_cast<std::size_t>(columns.rows()) != model.input_dim()) {
        throw DimensionMismatch(model.name() + ": expected inputs of dimension " +
                                std::to_string(model.input_dim()) + ", got " + std::to_string(columns.rows()));
    }
    Matrix out(static_cast<Eigen::Index>(model.output_dim()), columns.cols());
    for (Eigen::Index n = 0; n < columns.cols(); ++n) {
        out.col(n) = model.evaluate(columns.col(n));
    }
    return out;
}

Matrix evaluate_ensemble(const ForwardModel& model, const Ensemble& e) {
    return evaluate_columns(model, e.particles());
}

LinearModel::LinearModel(Matrix a) : a_(std::move(a)) {
    if (a_.size() == 0) {
        throw std::invalid_argument("LinearModel needs a non-empty matrix");
    }
}

Vector LinearModel::evaluate(const Vector& u) const {
    if (u.size() != a_.cols()) {
        throw DimensionMismatch("LinearModel: input has length " + std::to_string(u.size()) + ", expected " +
                                std::to_string(a_.cols()));
    }
    return a_ * u;
}

}  // namespace ki
