#include "ki/models/expsin.hpp"

#include "ki/core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ki {

ExpSinModel::ExpSinModel(std::size_t quadrature_points) {
    if (quadrature_points < 2) {
        throw std::invalid_argument("ExpSinModel needs at least two quadrature points");
    }
    sin_t_.resize(quadrature_points);
    const double step = 2.0 * std::numbers::pi / static_cast<double>(quadrature_points);
    for (std::size_t i = 0; i < quadrature_points; ++i) {
        sin_t_[i] = std::sin(step * static_cast<double>(i));
    }
}

Vector ExpSinModel::evaluate(const Vector& u) const {
    if (u.size() != 2) {
        throw DimensionMismatch("ExpSinModel expects a 2-vector");
    }
    if (!u.allFinite() || std::abs(u(0)) + std::abs(u(1)) > 700.0) {
        throw Overflow("ExpSinModel: |u1| + |u2| exceeds 700");
    }
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const double s : sin_t_) {
        const double f = std::exp(u(0) * s + u(1));
        sum += f;
        lo = std::min(lo, f);
        hi = std::max(hi, f);
    }
    Vector g(2);
    g(0) = sum / static_cast<double>(sin_t_.size());
    g(1) = hi - lo;
    return g;
}

}  // namespace ki
