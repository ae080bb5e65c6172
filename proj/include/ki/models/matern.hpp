#pragma once

#include "ki/core/ensemble.hpp"

#include <cstddef>
#include <vector>

namespace ki {

/// Matern covariance with unit variance:
/// k(r) = 2^{1-nu} / Gamma(nu) (sqrt(2 nu) r / l)^nu K_nu(sqrt(2 nu) r / l), k(0) = 1.
double matern_covariance(double r, double smoothness, double length);

/**
 * Leading Karhunen-Loeve pairs of a Matern field on the unit square,
 * discretized on an m x m grid of cell midpoints x_i = (i + 1/2) / m.
 *
 * Eigenvalues approximate the continuum operator (matrix eigenvalues times the
 * cell area 1/m^2) and eigenfunctions are orthonormal under the grid inner
 * product <f, g> = (1/m^2) sum_p f_p g_p. Node order is row-major (row = y).
 */
struct KlModes {
    std::size_t grid_n = 0;
    std::vector<double> eigenvalues;
    Matrix functions;  ///< grid_n^2 x n_modes

    double cell_area() const noexcept { return 1.0 / static_cast<double>(grid_n * grid_n); }
    double coordinate(std::size_t i) const noexcept {
        return (static_cast<double>(i) + 0.5) / static_cast<double>(grid_n);
    }
    std::size_t size() const noexcept { return eigenvalues.size(); }
};

KlModes matern_kl_modes(std::size_t grid_n, double smoothness, double length, std::size_t n_modes);

/// Bilinear interpolation of a midpoint-grid function to an arbitrary point of
/// the unit square; constant extrapolation within half a cell of the edge.
double interpolate_midpoint_grid(const double* values, std::size_t grid_n, double x, double y);

}  // namespace ki
