#pragma once

#include "ki/models/forward_model.hpp"

namespace ki {

/// f(t; u) = exp(u_1 sin t + u_2) sampled at M uniform points of [0, 2 pi);
/// G(u) = (mean f, max f - min f).
class ExpSinModel final : public ForwardModel {
public:
    static constexpr std::size_t kDefaultQuadraturePoints = 2048;

    explicit ExpSinModel(std::size_t quadrature_points = kDefaultQuadraturePoints);

    std::size_t input_dim() const override { return 2; }
    std::size_t output_dim() const override { return 2; }
    Vector evaluate(const Vector& u) const override;
    std::string name() const override { return "exp_sin"; }

    std::size_t quadrature_points() const noexcept { return sin_t_.size(); }

private:
    std::vector<double> sin_t_;
};

}  // namespace ki
