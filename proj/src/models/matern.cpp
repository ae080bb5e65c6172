#include "ki/models/matern.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ki {

double matern_covariance(double r, double smoothness, double length) {
    if (!(smoothness > 0.0) || !(length > 0.0)) {
        throw std::invalid_argument("Matern parameters must be positive");
    }
    if (r <= 0.0) {
        return 1.0;
    }
    const double z = std::sqrt(2.0 * smoothness) * r / length;
    const double log_scale = (1.0 - smoothness) * std::log(2.0) - std::lgamma(smoothness);
    return std::exp(log_scale + smoothness * std::log(z)) * std::cyl_bessel_k(smoothness, z);
}

KlModes matern_kl_modes(std::size_t grid_n, double smoothness, double length, std::size_t n_modes) {
    if (grid_n < 2) {
        throw std::invalid_argument("KL grid needs at least 2 points per side");
    }
    const std::size_t points = grid_n * grid_n;
    if (n_modes < 1 || n_modes > points) {
        throw std::invalid_argument("requested " + std::to_string(n_modes) + " KL modes from a grid of " +
                                    std::to_string(points) + " points");
    }
    // The kernel only depends on the index offsets (|di|, |dj|).
    const double h = 1.0 / static_cast<double>(grid_n);
    Matrix table(grid_n, grid_n);
    for (std::size_t di = 0; di < grid_n; ++di) {
        for (std::size_t dj = 0; dj < grid_n; ++dj) {
            const double r = h * std::hypot(static_cast<double>(di), static_cast<double>(dj));
            table(di, dj) = matern_covariance(r, smoothness, length);
        }
    }
    Matrix cov(points, points);
    for (std::size_t p = 0; p < points; ++p) {
        const std::size_t pi = p / grid_n;
        const std::size_t pj = p % grid_n;
        for (std::size_t q = 0; q <= p; ++q) {
            const std::size_t qi = q / grid_n;
            const std::size_t qj = q % grid_n;
            const double v = table(pi > qi ? pi - qi : qi - pi, pj > qj ? pj - qj : qj - pj);
            cov(p, q) = v;
            cov(q, p) = v;
        }
    }

    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw std::runtime_error("Matern covariance eigendecomposition failed");
    }
    const double area = h * h;
    const double inv_sqrt_area = 1.0 / h;

    KlModes modes;
    modes.grid_n = grid_n;
    modes.eigenvalues.resize(n_modes);
    modes.functions.resize(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(n_modes));
    // Eigen returns ascending eigenvalues.
    const auto last = static_cast<Eigen::Index>(points) - 1;
    for (std::size_t m = 0; m < n_modes; ++m) {
        const Eigen::Index src = last - static_cast<Eigen::Index>(m);
        const double value = eig.eigenvalues()(src) * area;
        if (!(value > 0.0)) {
            throw std::runtime_error("non-positive KL eigenvalue at mode " + std::to_string(m) +
                                     "; request fewer modes");
        }
        modes.eigenvalues[m] = value;
        Vector f = eig.eigenvectors().col(src) * inv_sqrt_area;
        Eigen::Index arg = 0;
        f.cwiseAbs().maxCoeff(&arg);
        if (f(arg) < 0.0) f = -f;
        modes.functions.col(static_cast<Eigen::Index>(m)) = f;
    }
    return modes;
}

double interpolate_midpoint_grid(const double* values, std::size_t grid_n, double x, double y) {
    const double m = static_cast<double>(grid_n);
    const auto locate = [&](double s, std::size_t& i0, double& frac) {
        const double t = std::clamp(s * m - 0.5, 0.0, m - 1.0);
        i0 = std::min(static_cast<std::size_t>(t), grid_n - 2);
        frac = t - static_cast<double>(i0);
    };
    std::size_t ix = 0, iy = 0;
    double fx = 0.0, fy = 0.0;
    locate(x, ix, fx);
    locate(y, iy, fy);
    const auto at = [&](std::size_t row, std::size_t col) { return values[row * grid_n + col]; };
    const double bottom = (1.0 - fx) * at(iy, ix) + fx * at(iy, ix + 1);
    const double top = (1.0 - fx) * at(iy + 1, ix) + fx * at(iy + 1, ix + 1);
    return (1.0 - fy) * bottom + fy * top;
}

}  // namespace ki
