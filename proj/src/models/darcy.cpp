#include "ki/models/darcy.hpp"

#include "ki/core/errors.hpp"
#include "ki/simd/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ki {

Vector permeability_from_coeffs(const Vector& u, const Matrix& scaled_modes) {
    if (u.size() > scaled_modes.cols()) {
        throw DimensionMismatch("permeability_from_coeffs: " + std::to_string(u.size()) +
                                " coefficients for " + std::to_string(scaled_modes.cols()) + " modes");
    }
    const Vector log_field = scaled_modes.leftCols(u.size()) * u;
    if (!log_field.allFinite() || log_field.cwiseAbs().maxCoeff() > 700.0) {
        throw Overflow("log-permeability exceeds 700 in magnitude");
    }
    return log_field.array().exp().matrix();
}

Vector darcy_solve(const Vector& a, const Vector& f, const NodeGrid& grid, double tolerance,
                   DarcySolveStats* stats) {
    const std::size_t n = grid.interior;
    const std::size_t w = grid.width();
    const auto total = static_cast<Eigen::Index>(grid.nodes());
    if (a.size() != total || f.size() != total) {
        throw DimensionMismatch("darcy_solve: fields must have one value per node");
    }
    if (n < 1) {
        throw std::invalid_argument("darcy_solve: grid needs at least one interior node");
    }
    if (!(a.minCoeff() > 0.0)) {
        throw std::invalid_argument("darcy_solve: permeability must be positive");
    }

    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Vector center = Vector::Zero(total), east = Vector::Zero(total), west = Vector::Zero(total);
    Vector north = Vector::Zero(total), south = Vector::Zero(total), inv_diag = Vector::Zero(total);
    Vector rhs = Vector::Zero(total);
    for (std::size_t i = 1; i <= n; ++i) {
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t c = grid.index(i, j);
            const double ae = 0.5 * (a(c) + a(c + 1)) * inv_h2;
            const double aw = 0.5 * (a(c) + a(c - 1)) * inv_h2;
            const double an = 0.5 * (a(c) + a(c + w)) * inv_h2;
            const double as = 0.5 * (a(c) + a(c - w)) * inv_h2;
            // Neighbours on the boundary carry p = 0, so their couplings drop out.
            east(c) = (j < n) ? ae : 0.0;
            west(c) = (j > 1) ? aw : 0.0;
            north(c) = (i < n) ? an : 0.0;
            south(c) = (i > 1) ? as : 0.0;
            center(c) = ae + aw + an + as;
            inv_diag(c) = 1.0 / center(c);
            rhs(c) = f(c);
        }
    }
    const simd::Stencil5 op{n, center.data(), east.data(), west.data(), north.data(), south.data()};
    const auto& k = simd::active();
    const auto len = static_cast<std::size_t>(total);

    Vector x = Vector::Zero(total);
    const double b_norm = std::sqrt(k.dot(rhs.data(), rhs.data(), len));
    if (b_norm == 0.0) {
        if (stats) *stats = {0, 0.0};
        return x;
    }
    // Boundary entries of the padded layout stay zero in every vector.
    const auto true_residual = [&](Vector& r) {
        k.stencil5(op, x.data(), r.data());
        r = rhs - r;
        for (std::size_t c = 0; c < len; ++c) {
            if (center(static_cast<Eigen::Index>(c)) == 0.0) r(static_cast<Eigen::Index>(c)) = 0.0;
        }
        return std::sqrt(k.dot(r.data(), r.data(), len)) / b_norm;
    };
    const double accept = std::max(10.0 * tolerance, 1e-9);
    const std::size_t max_iter = std::max<std::size_t>(1000, 20 * n * n);
    constexpr int kMaxRestarts = 8;

    Vector r = rhs;
    Vector z(total), p(total), ap = Vector::Zero(total);
    std::size_t iter = 0;
    double true_res = 1.0;
    for (int restart = 0; restart <= kMaxRestarts && iter < max_iter; ++restart) {
        // On long ill-conditioned solves the recursively updated residual drifts
        // away from b - Ax; restarting from the current iterate resynchronises it.
        if (restart > 0) {
            const double previous = true_res;
            true_res = true_residual(r);
            if (true_res <= accept || true_res >= previous) break;
        }
        z = r.cwiseProduct(inv_diag);
        p = z;
        double rz = k.dot(r.data(), z.data(), len);
        for (; iter < max_iter; ++iter) {
            k.stencil5(op, p.data(), ap.data());
            const double alpha = rz / k.dot(p.data(), ap.data(), len);
            k.axpy(alpha, p.data(), x.data(), len);
            k.axpy(-alpha, ap.data(), r.data(), len);
            if (std::sqrt(k.dot(r.data(), r.data(), len)) / b_norm <= tolerance) {
                ++iter;
                break;
            }
            z = r.cwiseProduct(inv_diag);
            const double rz_next = k.dot(r.data(), z.data(), len);
            k.xpby(z.data(), rz_next / rz, p.data(), len);
            rz = rz_next;
        }
    }
    true_res = true_residual(r);
    if (!(true_res <= accept)) {
        throw SolverError("Darcy CG did not converge: relative residual " + std::to_string(true_res) + " after " +
                          std::to_string(iter) + " iterations");
    }
    if (stats) *stats = {iter, true_res};
    return x;
}

double sample_node_field(const Vector& field, const NodeGrid& grid, double x, double y) {
    const double h = grid.spacing();
    const std::size_t last = grid.width() - 1;
    const auto locate = [&](double s, std::size_t& i0, double& frac) {
        const double t = std::clamp(s / h, 0.0, static_cast<double>(last));
        i0 = std::min(static_cast<std::size_t>(t), last - 1);
        frac = t - static_cast<double>(i0);
    };
    std::size_t ix = 0, iy = 0;
    double fx = 0.0, fy = 0.0;
    locate(x, ix, fx);
    locate(y, iy, fy);
    const double bottom = (1.0 - fx) * field(grid.index(iy, ix)) + fx * field(grid.index(iy, ix + 1));
    const double top = (1.0 - fx) * field(grid.index(iy + 1, ix)) + fx * field(grid.index(iy + 1, ix + 1));
    return (1.0 - fy) * bottom + fy * top;
}

DarcyModel::DarcyModel(const DarcyConfig& config) : config_(config), grid_{config.grid_n} {
    if (config_.grid_n < 2) {
        throw std::invalid_argument("DarcyModel: grid_n must be at least 2");
    }
    if (config_.obs_stride < 1) {
        throw std::invalid_argument("DarcyModel: obs_stride must be at least 1");
    }
    if (config_.kl_grid_n == 0) {
        config_.kl_grid_n = std::min<std::size_t>(config_.grid_n, 40);
    }
    modes_ = matern_kl_modes(config_.kl_grid_n, config_.smoothness, config_.length, config_.kl_dim);

    const auto total = static_cast<Eigen::Index>(grid_.nodes());
    scaled_modes_.resize(total, static_cast<Eigen::Index>(config_.kl_dim));
    const double h = grid_.spacing();
    for (std::size_t m = 0; m < config_.kl_dim; ++m) {
        const double scale = std::sqrt(modes_.eigenvalues[m]);
        const double* values = modes_.functions.col(static_cast<Eigen::Index>(m)).data();
        for (std::size_t i = 0; i < grid_.width(); ++i) {
            for (std::size_t j = 0; j < grid_.width(); ++j) {
                const double x = static_cast<double>(j) * h;
                const double y = static_cast<double>(i) * h;
                scaled_modes_(static_cast<Eigen::Index>(grid_.index(i, j)), static_cast<Eigen::Index>(m)) =
                    scale * interpolate_midpoint_grid(values, modes_.grid_n, x, y);
            }
        }
    }
    forcing_ = Vector::Constant(total, config_.source);
    for (std::size_t i = 1; i <= grid_.interior; i += config_.obs_stride) {
        for (std::size_t j = 1; j <= grid_.interior; j += config_.obs_stride) {
            observed_.push_back(grid_.index(i, j));
        }
    }
}

Vector DarcyModel::permeability(const Vector& u) const {
    if (static_cast<std::size_t>(u.size()) != config_.kl_dim) {
        throw DimensionMismatch("DarcyModel: expected " + std::to_string(config_.kl_dim) + " coefficients");
    }
    return permeability_from_coeffs(u, scaled_modes_);
}

Vector DarcyModel::pressure(const Vector& u) const {
    return darcy_solve(permeability(u), forcing_, grid_, config_.tolerance);
}

Vector DarcyModel::observe(const Vector& pressure) const {
    Vector out(static_cast<Eigen::Index>(observed_.size()));
    for (std::size_t o = 0; o < observed_.size(); ++o) {
        out(static_cast<Eigen::Index>(o)) = pressure(static_cast<Eigen::Index>(observed_[o]));
    }
    return out;
}

Vector DarcyModel::evaluate(const Vector& u) const {
    return observe(pressure(u));
}

}  // namespace ki
