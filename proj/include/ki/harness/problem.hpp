#pragma once

#include "ki/core/linalg.hpp"
#include "ki/core/random.hpp"
#include "ki/models/darcy.hpp"
#include "ki/models/forward_model.hpp"

#include <memory>
#include <optional>

namespace ki {

struct GaussianPrior {
    Vector mean;
    SpdMatrix cov;
};

/// Everything a single trial needs: model, noise, truth, realized data and
/// the initial-ensemble distribution.
struct InverseProblem {
    std::shared_ptr<const ForwardModel> model;
    SpdMatrix gamma;
    Vector truth;
    Vector data;
    DistributionSpec initial_dist;
    std::optional<GaussianPrior> uki_prior;

    /// Throws DimensionMismatch when the pieces disagree.
    void validate() const;

    /// The explicit prior, or the mean/covariance of initial_dist.
    GaussianPrior prior() const;
};

/// y = G(u*) + L z with L L^T = Gamma and z drawn from `rng`.
Vector generate_data(const ForwardModel& model, const Vector& truth, const SpdMatrix& gamma, SeededRng& rng);

/// (1/2)(y - g)^T Gamma^{-1} (y - g), via a Cholesky solve.
double misfit_cost(const Vector& y, const Vector& g_mean, const SpdMatrix& gamma);

/**
 * A problem before its data realization. Trials call `realize` with their own
 * stream so that the noise draw changes from trial to trial while the model,
 * truth and distributions stay fixed.
 */
struct ProblemSetup {
    std::string name;
    std::shared_ptr<const ForwardModel> model;
    SpdMatrix gamma;
    Vector truth;
    DistributionSpec initial_dist;
    std::optional<GaussianPrior> uki_prior;

    InverseProblem realize(SeededRng& rng) const;
};

struct ExpSinOptions {
    std::size_t quadrature_points = 2048;
    double sigma = 0.1;
};

/// u* = (1, 0.8); u_1 ~ Lognormal(-1.38, 0.06), u_2 ~ N(0, 0.5) independent.
ProblemSetup make_exp_sin_setup(const ExpSinOptions& options);

struct Lorenz96Options {
    std::size_t dimension = 20;
    double forcing = 8.0;
    double dt = 0.05;
    std::size_t steps = 8;
    double spinup_time = 1000.0;
    double sigma = 0.5;
    std::uint64_t truth_seed = 0;
};

/// Truth: standard-normal draw integrated `spinup_time` units onto the
/// attractor. Initial ensemble: standard normal.
ProblemSetup make_lorenz96_setup(const Lorenz96Options& options);

struct DarcyOptions {
    DarcyConfig model;
    double truth_value = -1.5;
    /// Gamma = (sigma_fraction * max |G(u*)|)^2 I
    double sigma_fraction = 0.01;
};

/// u* = (-1.5, ..., -1.5); initial ensemble N(0, I).
ProblemSetup make_darcy_setup(const DarcyOptions& options);

struct LinearOptions {
    std::size_t input_dim = 2;
    std::size_t output_dim = 2;
    double sigma = 0.1;
    std::uint64_t matrix_seed = 0;
};

/// Random A with standard-normal entries, truth of ones, N(0, I) initial ensemble.
ProblemSetup make_linear_setup(const LinearOptions& options);

}  // namespace ki
