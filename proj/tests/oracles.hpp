#pragma once

// Reference values computed without touching the library's own numerics:
// plain loops, closed forms and slow-but-obvious algorithms.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Gauss-Jordan elimination with partial pivoting, element by element.
inline Matrix gauss_jordan_inverse(const Matrix& m) {
    const auto n = m.rows();
    std::vector<std::vector<double>> a(n, std::vector<double>(2 * n, 0.0));
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) a[i][j] = m(i, j);
        a[i][n + i] = 1.0;
    }
    for (Eigen::Index col = 0; col < n; ++col) {
        Eigen::Index pivot = col;
        for (Eigen::Index r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (a[pivot][col] == 0.0) throw std::runtime_error("singular");
        std::swap(a[pivot], a[col]);
        const double p = a[col][col];
        for (auto& v : a[col]) v /= p;
        for (Eigen::Index r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (Eigen::Index c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Matrix inv(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) inv(i, j) = a[i][n + j];
    }
    return inv;
}

inline Matrix naive_product(const Matrix& a, const Matrix& b) {
    Matrix c = Matrix::Zero(a.rows(), b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < b.cols(); ++j) {
            for (Eigen::Index k = 0; k < a.cols(); ++k) c(i, j) += a(i, k) * b(k, j);
        }
    }
    return c;
}

// K_1(x) = int_0^inf exp(-x cosh t) cosh t dt. The integrand is smooth and
// decays doubly exponentially, so the trapezoid rule converges very fast.
inline double bessel_k1(double x) {
    const double h = 1.0 / 64.0;
    double sum = 0.5 * std::exp(-x);
    for (int i = 1;; ++i) {
        const double t = h * i;
        const double term = std::exp(-x * std::cosh(t)) * std::cosh(t);
        sum += term;
        if (term < 1e-300 || (term < 1e-18 * sum && x * std::cosh(t) > 40.0)) break;
    }
    return h * sum;
}

// Modified Bessel I_0 from its power series.
inline double bessel_i0(double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 60; ++k) {
        term *= (x / 2.0) * (x / 2.0) / (static_cast<double>(k) * k);
        sum += term;
    }
    return sum;
}

// Matern nu = 1 with unit variance.
inline double matern_nu1(double r, double length) {
    if (r == 0.0) return 1.0;
    const double s = std::sqrt(2.0) * r / length;
    return s * bessel_k1(s);
}

// -Laplace(p) = 1 on the unit square, p = 0 on the boundary, via the double
// sine series over odd (m, n).
inline double poisson_unit_square(double x, double y, int terms = 801) {
    const double pi = std::numbers::pi;
    double p = 0.0;
    for (int m = 1; m <= terms; m += 2) {
        for (int n = 1; n <= terms; n += 2) {
            p += 16.0 / (std::pow(pi, 4) * m * n * (static_cast<double>(m) * m + static_cast<double>(n) * n)) *
                 std::sin(m * pi * x) * std::sin(n * pi * y);
        }
    }
    return p;
}

// lambda_j for the theta recursion with theta_0 = 1, j >= 1.
inline std::vector<double> recursive_lambdas(std::size_t count) {
    std::vector<double> theta{1.0};
    std::vector<double> out;
    for (std::size_t j = 1; j <= count; ++j) {
        const double t = theta.back();
        theta.push_back((std::sqrt(t * t * t * t + 4.0 * t * t) - t * t) / 2.0);
        out.push_back(theta[j] * (1.0 / theta[j - 1] - 1.0));
    }
    return out;
}

inline Vector lorenz96_rhs_loop(const Vector& x, double forcing) {
    const auto d = x.size();
    Vector out(d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double xm1 = x((k - 1 + d) % d);
        const double xm2 = x((k - 2 + d) % d);
        const double xp1 = x((k + 1) % d);
        out(k) = -x(k) - xm1 * (xm2 - xp1) + forcing;
    }
    return out;
}

template <class F>
Vector rk4_loop(Vector x, F&& f, double dt, std::size_t steps) {
    for (std::size_t s = 0; s < steps; ++s) {
        const Vector k1 = f(x);
        const Vector k2 = f(Vector(x + 0.5 * dt * k1));
        const Vector k3 = f(Vector(x + 0.5 * dt * k2));
        const Vector k4 = f(Vector(x + dt * k3));
        x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

// One EKI step with 1/N covariances, written out from the gain formula with
// an explicit inverse.
inline Matrix eki_step_explicit(const Matrix& u, const Matrix& g, const Vector& y, const Matrix& gamma, double dt) {
    const auto n = static_cast<double>(u.cols());
    const Vector ub = u.rowwise().mean();
    const Vector gb = g.rowwise().mean();
    Matrix cug = Matrix::Zero(u.rows(), g.rows());
    Matrix cgg = Matrix::Zero(g.rows(), g.rows());
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
        cug += (u.col(c) - ub) * (g.col(c) - gb).transpose() / n;
        cgg += (g.col(c) - gb) * (g.col(c) - gb).transpose() / n;
    }
    const Matrix gain = cug * gauss_jordan_inverse(gamma + dt * cgg);
    Matrix out = u;
    for (Eigen::Index c = 0; c < u.cols(); ++c) out.col(c) += dt * gain * (y - g.col(c));
    return out;
}

}  // namespace oracle
