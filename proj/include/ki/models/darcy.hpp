#pragma once

#include "ki/models/forward_model.hpp"
#include "ki/models/matern.hpp"

namespace ki {

/**
 * Node grid on the unit square with n interior nodes per side and spacing
 * h = 1/(n+1). Fields are stored row-major over all (n+2)^2 nodes including
 * the boundary ring; node (i, j) sits at (x, y) = (j h, i h).
 */
struct NodeGrid {
    std::size_t interior = 0;

    std::size_t width() const noexcept { return interior + 2; }
    std::size_t nodes() const noexcept { return width() * width(); }
    double spacing() const noexcept { return 1.0 / static_cast<double>(interior + 1); }
    std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * width() + j; }
};

/// a(x) = exp(sum_i u_i s_i(x)) where column i of `scaled_modes` holds
/// sqrt(lambda_i) phi_i at every node. Throws Overflow if the exponent exceeds 700.
Vector permeability_from_coeffs(const Vector& u, const Matrix& scaled_modes);

struct DarcySolveStats {
    std::size_t iterations = 0;
    double relative_residual = 0.0;
};

/**
 * Solves -div(a grad p) = f with p = 0 on the boundary. Five-point stencil;
 * the coefficient on each face is the mean of the two adjacent nodal values.
 * Jacobi-preconditioned CG to a relative residual of `tolerance`
 * (<= 1e-9 required). `a` and `f` are node fields of grid.nodes() entries;
 * boundary values of f are ignored. Throws SolverError on non-convergence.
 */
Vector darcy_solve(const Vector& a, const Vector& f, const NodeGrid& grid, double tolerance = 1e-10,
                   DarcySolveStats* stats = nullptr);

/// Bilinear interpolation of a node field at (x, y) in [0,1]^2.
double sample_node_field(const Vector& field, const NodeGrid& grid, double x, double y);

struct DarcyConfig {
    std::size_t grid_n = 32;      ///< interior nodes per side of the solve grid
    std::size_t kl_dim = 20;      ///< parameters d
    std::size_t kl_grid_n = 0;    ///< KL discretization; 0 picks min(grid_n, 40)
    double smoothness = 1.0;
    double length = 0.25;
    double source = 1.0;          ///< constant forcing f
    std::size_t obs_stride = 1;
    double tolerance = 1e-10;
};

/// G(u) = pressure at every obs_stride-th interior node (row-major, starting at
/// interior node (1, 1)), with log-permeability given by the truncated KL field.
class DarcyModel final : public ForwardModel {
public:
    explicit DarcyModel(const DarcyConfig& config);

    std::size_t input_dim() const override { return config_.kl_dim; }
    std::size_t output_dim() const override { return observed_.size(); }
    Vector evaluate(const Vector& u) const override;
    std::string name() const override { return "darcy"; }

    const DarcyConfig& config() const noexcept { return config_; }
    const NodeGrid& grid() const noexcept { return grid_; }
    const KlModes& kl_modes() const noexcept { return modes_; }
    const Matrix& scaled_modes() const noexcept { return scaled_modes_; }

    Vector permeability(const Vector& u) const;
    Vector pressure(const Vector& u) const;
    Vector observe(const Vector& pressure) const;

private:
    DarcyConfig config_;
    NodeGrid grid_;
    KlModes modes_;
    Matrix scaled_modes_;
    Vector forcing_;
    std::vector<std::size_t> observed_;
};

}  // namespace ki
