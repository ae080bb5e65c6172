#pragma once

#include "ki/models/forward_model.hpp"

#include <functional>

namespace ki {

/// dx_k/dt = -x_k - x_{k-1}(x_{k-2} - x_{k+1}) + F, cyclic indices.
Vector lorenz96_rhs(const Vector& x, double forcing);

using Rhs = std::function<Vector(const Vector&)>;

/// Classical fixed-step RK4. Throws Diverged(step) on a non-finite state.
Vector rk4_integrate(const Vector& x0, const Rhs& rhs, double dt, std::size_t n_steps);

/// Flow map of Lorenz '96 over dt * n_steps time units: G(u) = x(t_K) with x(0) = u.
class Lorenz96Model final : public ForwardModel {
public:
    Lorenz96Model(std::size_t dimension = 20, double forcing = 8.0, double dt = 0.05, std::size_t n_steps = 8);

    std::size_t input_dim() const override { return dimension_; }
    std::size_t output_dim() const override { return dimension_; }
    Vector evaluate(const Vector& u) const override;
    std::string name() const override { return "lorenz96"; }

    double forcing() const noexcept { return forcing_; }
    double dt() const noexcept { return dt_; }

    /// Integrates an arbitrary number of steps with this model's F and dt.
    Vector integrate(const Vector& x0, std::size_t n_steps) const;

private:
    std::size_t dimension_;
    double forcing_;
    double dt_;
    std::size_t n_steps_;
};

}  // namespace ki
