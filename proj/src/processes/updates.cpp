#include "ki/processes/updates.hpp"

#include "ki/core/errors.hpp"
#include "ki/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ki {

namespace {

void check_evaluations(const Ensemble& v, const Matrix& g, const Vector& y, std::size_t gamma_size,
                       const char* who) {
    if (static_cast<std::size_t>(g.cols()) != v.size()) {
        throw DimensionMismatch(std::string(who) + ": " + std::to_string(g.cols()) + " evaluations for " +
                                std::to_string(v.size()) + " particles");
    }
    if (g.rows() != y.size() || static_cast<std::size_t>(y.size()) != gamma_size) {
        throw DimensionMismatch(std::string(who) + ": observation dimensions disagree (G " +
                                std::to_string(g.rows()) + ", y " + std::to_string(y.size()) + ", noise " +
                                std::to_string(gamma_size) + ")");
    }
}

}  // namespace

Ensemble nesterov_nudge(const Ensemble& current, const Ensemble& previous, double lambda) {
    if (!current.same_shape(previous)) {
        throw DimensionMismatch("nesterov_nudge: current and previous ensembles differ in shape");
    }
    Matrix out(current.particles().rows(), current.particles().cols());
    simd::active().extrapolate(current.particles().data(), previous.particles().data(), lambda, out.data(),
                               static_cast<std::size_t>(out.size()));
    return Ensemble(std::move(out));
}

Ensemble eki_update(const Ensemble& v, const Matrix& gv, const Vector& y, const SpdMatrix& gamma, double dt,
                    Normalization norm) {
    check_evaluations(v, gv, y, gamma.size(), "eki_update");
    if (v.size() < 2) {
        throw std::invalid_argument("eki_update: ensemble needs at least two particles");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("eki_update: dt must be positive");
    }
    const Matrix c_ug = cross_cov(v.particles(), gv, norm);
    const Matrix c_gg = cross_cov(gv, gv, norm);
    const SpdMatrix system(symmetrized(gamma.matrix() + dt * c_gg));
    const Matrix innovations = (-gv).colwise() + y;
    const Matrix weights = spd_solve(system, innovations);
    return Ensemble(v.particles() + dt * (c_ug * weights));
}

Ensemble etki_compute_increment(const Ensemble& v, const Matrix& gv, const Vector& y, const SpdMatrix& gamma) {
    check_evaluations(v, gv, y, gamma.size(), "etki_compute_increment");
    const auto n = static_cast<Eigen::Index>(v.size());
    if (n < 2) {
        throw std::invalid_argument("etki_compute_increment: ensemble needs at least two particles");
    }
    const Vector u_mean = ensemble_mean(v);
    const Vector g_mean = column_mean(gv);
    const Matrix du = anomalies(v, Normalization::Sample);
    const Matrix dg = anomalies(gv, Normalization::Sample);

    const Matrix gamma_inv_dg = spd_solve(gamma, dg);
    const Matrix precision = Matrix::Identity(n, n) + symmetrized(dg.transpose() * gamma_inv_dg);
    const SpdMatrix omega(symmetrized(spd_solve(SpdMatrix(precision), Matrix(Matrix::Identity(n, n)))));

    const Vector gamma_inv_innov = spd_solve(gamma, Vector(y - g_mean));
    const Vector w = omega.matrix() * (dg.transpose() * gamma_inv_innov);
    const Matrix root = sym_sqrt(omega).matrix();

    Matrix transform = std::sqrt(static_cast<double>(n - 1)) * root;
    transform.colwise() += w;
    Matrix out = du * transform;
    out.colwise() += u_mean;
    return Ensemble(std::move(out));
}

UkiHyper UkiHyper::from_prior(const Vector& prior_mean, const SpdMatrix& prior_cov, const SpdMatrix& gamma,
                              double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("UKI alpha must lie in (0, 1]");
    }
    UkiHyper h;
    h.r = prior_mean;
    h.alpha = alpha;
    h.sigma_omega = SpdMatrix((2.0 - alpha * alpha) * prior_cov.matrix());
    h.sigma_nu = SpdMatrix(2.0 * gamma.matrix());
    return h;
}

void UkiHyper::validate(std::size_t d, std::size_t k) const {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("UKI alpha must lie in (0, 1]");
    }
    if (static_cast<std::size_t>(r.size()) != d || sigma_omega.size() != d) {
        throw DimensionMismatch("UKI hyperparameters do not match parameter dimension");
    }
    if (sigma_nu.size() != k) {
        throw DimensionMismatch("UKI Sigma_nu does not match observation dimension");
    }
}

double uki_gamma(std::size_t d) {
    const double dd = static_cast<double>(d);
    return std::sqrt(dd) * std::min(std::sqrt(4.0 / dd), 1.0);
}

Ensemble uki_generate_ensemble(const Vector& m, const SpdMatrix& c, const UkiHyper& hyper) {
    const auto d = m.size();
    if (static_cast<Eigen::Index>(c.size()) != d) {
        throw DimensionMismatch("uki_generate_ensemble: mean and covariance sizes differ");
    }
    hyper.validate(static_cast<std::size_t>(d), hyper.sigma_nu.size());
    const Vector m_hat = hyper.r + hyper.alpha * (m - hyper.r);
    const SpdMatrix c_hat(symmetrized(hyper.alpha * hyper.alpha * c.matrix() + hyper.sigma_omega.matrix()));
    const Matrix l = cholesky_lower(c_hat);
    const double gamma = uki_gamma(static_cast<std::size_t>(d));

    Matrix points(d, 2 * d + 1);
    points.col(0) = m_hat;
    for (Eigen::Index i = 0; i < d; ++i) {
        points.col(1 + i) = m_hat + gamma * l.col(i);
        points.col(1 + d + i) = m_hat - gamma * l.col(i);
    }
    return Ensemble(std::move(points));
}

MeanCov uki_update_mean_cov(const Ensemble& u, const Matrix& gu, const Vector& y, const SpdMatrix& sigma_nu) {
    check_evaluations(u, gu, y, sigma_nu.size(), "uki_update_mean_cov");
    const auto d = static_cast<Eigen::Index>(u.dim());
    if (u.size() != static_cast<std::size_t>(2 * d + 1)) {
        throw DimensionMismatch("uki_update_mean_cov: sigma ensemble must have 2d+1 columns");
    }
    const double gamma = uki_gamma(static_cast<std::size_t>(d));
    const double weight = 1.0 / (2.0 * gamma * gamma);

    const Vector m_hat = u.particles().col(0);
    const Vector g_hat = gu.col(0);
    const Matrix du = u.particles().colwise() - m_hat;
    const Matrix dg = gu.colwise() - g_hat;

    const Matrix c_hat = weight * (du * du.transpose());
    const Matrix c_ug = weight * (du * dg.transpose());
    const SpdMatrix c_gg(symmetrized(weight * (dg * dg.transpose()) + sigma_nu.matrix()));

    const Vector mean = m_hat + c_ug * spd_solve(c_gg, Vector(y - g_hat));
    const Matrix gain_t = spd_solve(c_gg, Matrix(c_ug.transpose()));
    const Matrix cov = symmetrized(c_hat - c_ug * gain_t);
    return MeanCov{mean, SpdMatrix(cov)};
}

}  // namespace ki
