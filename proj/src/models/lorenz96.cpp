#include "ki/models/lorenz96.hpp"

#include "ki/core/errors.hpp"
#include "ki/simd/kernels.hpp"

namespace ki {

Vector lorenz96_rhs(const Vector& x, double forcing) {
    if (x.size() < 4) {
        throw std::invalid_argument("Lorenz '96 needs at least 4 state components");
    }
    Vector out(x.size());
    simd::active().lorenz96_rhs(x.data(), forcing, out.data(), static_cast<std::size_t>(x.size()));
    return out;
}

Vector rk4_integrate(const Vector& x0, const Rhs& rhs, double dt, std::size_t n_steps) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("rk4_integrate: dt must be positive");
    }
    Vector x = x0;
    for (std::size_t s = 0; s < n_steps; ++s) {
        const Vector k1 = rhs(x);
        const Vector k2 = rhs(x + 0.5 * dt * k1);
        const Vector k3 = rhs(x + 0.5 * dt * k2);
        const Vector k4 = rhs(x + dt * k3);
        x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!x.allFinite()) {
            throw Diverged(s, "RK4 state became non-finite at step " + std::to_string(s));
        }
    }
    return x;
}

Lorenz96Model::Lorenz96Model(std::size_t dimension, double forcing, double dt, std::size_t n_steps)
    : dimension_(dimension), forcing_(forcing), dt_(dt), n_steps_(n_steps) {
    if (dimension_ < 4) {
        throw std::invalid_argument("Lorenz96Model: dimension must be at least 4");
    }
    if (!(dt_ > 0.0)) {
        throw std::invalid_argument("Lorenz96Model: dt must be positive");
    }
}

Vector Lorenz96Model::integrate(const Vector& x0, std::size_t n_steps) const {
    if (static_cast<std::size_t>(x0.size()) != dimension_) {
        throw DimensionMismatch("Lorenz96Model: state has wrong dimension");
    }
    const double f = forcing_;
    return rk4_integrate(x0, [f](const Vector& x) { return lorenz96_rhs(x, f); }, dt_, n_steps);
}

Vector Lorenz96Model::evaluate(const Vector& u) const {
    return integrate(u, n_steps_);
}

}  // namespace ki
