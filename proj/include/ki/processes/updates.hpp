#pragma once

#include "ki/core/ensemble.hpp"
#include "ki/core/linalg.hpp"

namespace ki {

/// Particle-wise momentum step: column n becomes current_n + lambda (current_n - previous_n).
Ensemble nesterov_nudge(const Ensemble& current, const Ensemble& previous, double lambda);

/**
 * One deterministic EKI step on the (possibly nudged) ensemble `v` with
 * forward evaluations `gv` (k x N):
 *
 *   v_n + dt C^{vG} (Gamma + dt C^{GG})^{-1} (y - G(v_n)).
 *
 * Covariances use 1/N unless `norm` says otherwise. The gain is applied
 * through a Cholesky solve of Gamma + dt C^{GG}.
 */
Ensemble eki_update(const Ensemble& v, const Matrix& gv, const Vector& y, const SpdMatrix& gamma, double dt,
                    Normalization norm = Normalization::Population);

/**
 * Ensemble transform update. Works in the N-dimensional ensemble space:
 *
 *   Omega = (I + dG^T Gamma^{-1} dG)^{-1},  w = Omega dG^T Gamma^{-1} (y - mean G)
 *   col_n(result) = mean u + du (w + sqrt(N-1) col_n(sqrt(Omega)))
 *
 * with anomalies scaled by 1/sqrt(N-1). Returns the updated ensemble itself.
 */
Ensemble etki_compute_increment(const Ensemble& v, const Matrix& gv, const Vector& y, const SpdMatrix& gamma);

struct UkiHyper {
    Vector r;
    double alpha = 1.0;
    SpdMatrix sigma_omega;
    SpdMatrix sigma_nu;

    /// r = m, Sigma_nu = 2 Gamma, Sigma_omega = (2 - alpha^2) C.
    static UkiHyper from_prior(const Vector& prior_mean, const SpdMatrix& prior_cov, const SpdMatrix& gamma,
                               double alpha);

    void validate(std::size_t d, std::size_t k) const;
};

/// gamma = sqrt(d) min(sqrt(4/d), 1).
double uki_gamma(std::size_t d);

/// 2d+1 sigma points: m_hat, m_hat + gamma L_n, m_hat - gamma L_n, with
/// m_hat = r + alpha (m - r) and L = chol(alpha^2 C + Sigma_omega).
Ensemble uki_generate_ensemble(const Vector& m, const SpdMatrix& c, const UkiHyper& hyper);

struct MeanCov {
    Vector mean;
    SpdMatrix cov;
};

/**
 * Kalman mean/covariance update from a (possibly nudged) sigma ensemble.
 * Column 0 is taken as m_hat and its evaluation as G(m_hat); the spread terms
 * sum over all 2d+1 columns with weight 1/(2 gamma^2).
 */
MeanCov uki_update_mean_cov(const Ensemble& u, const Matrix& gu, const Vector& y, const SpdMatrix& sigma_nu);

}  // namespace ki
