#include "ki/harness/problem.hpp"

#include "ki/core/errors.hpp"
#include "ki/models/expsin.hpp"
#include "ki/models/lorenz96.hpp"

#include <cmath>

namespace ki {

void InverseProblem::validate() const {
    if (!model) {
        throw std::invalid_argument("InverseProblem has no model");
    }
    const std::size_t d = model->input_dim();
    const std::size_t k = model->output_dim();
    if (gamma.size() != k || static_cast<std::size_t>(data.size()) != k) {
        throw DimensionMismatch("InverseProblem: noise covariance and data must have the model output dimension");
    }
    if (static_cast<std::size_t>(truth.size()) != d || distribution_dim(initial_dist) != d) {
        throw DimensionMismatch("InverseProblem: truth and initial distribution must have the model input dimension");
    }
    if (uki_prior && (static_cast<std::size_t>(uki_prior->mean.size()) != d || uki_prior->cov.size() != d)) {
        throw DimensionMismatch("InverseProblem: UKI prior has the wrong dimension");
    }
}

GaussianPrior InverseProblem::prior() const {
    if (uki_prior) return *uki_prior;
    return GaussianPrior{distribution_mean(initial_dist), distribution_covariance(initial_dist)};
}

Vector generate_data(const ForwardModel& model, const Vector& truth, const SpdMatrix& gamma, SeededRng& rng) {
    if (gamma.size() != model.output_dim()) {
        throw DimensionMismatch("generate_data: noise covariance does not match model output");
    }
    const Vector clean = model.evaluate(truth);
    const Matrix l = cholesky_lower(gamma);
    return clean + l * rng.standard_normal(model.output_dim());
}

double misfit_cost(const Vector& y, const Vector& g_mean, const SpdMatrix& gamma) {
    if (y.size() != g_mean.size() || static_cast<std::size_t>(y.size()) != gamma.size()) {
        throw DimensionMismatch("misfit_cost: dimensions disagree");
    }
    const Vector r = y - g_mean;
    return std::max(0.0, 0.5 * r.dot(spd_solve(gamma, r)));
}

InverseProblem ProblemSetup::realize(SeededRng& rng) const {
    InverseProblem p{model, gamma, truth, generate_data(*model, truth, gamma, rng), initial_dist, uki_prior};
    p.validate();
    return p;
}

ProblemSetup make_exp_sin_setup(const ExpSinOptions& options) {
    ProblemSetup s;
    s.name = "exp_sin";
    s.model = std::make_shared<ExpSinModel>(options.quadrature_points);
    s.gamma = SpdMatrix::scaled_identity(2, options.sigma * options.sigma);
    s.truth = Vector(2);
    s.truth << 1.0, 0.8;
    s.initial_dist = Product{{Lognormal1D{-1.38, 0.06}, Gaussian1D{0.0, 0.5}}};
    return s;
}

ProblemSetup make_lorenz96_setup(const Lorenz96Options& options) {
    auto model = std::make_shared<Lorenz96Model>(options.dimension, options.forcing, options.dt, options.steps);
    SeededRng rng(options.truth_seed, 0x7275747275ull);
    const Vector x0 = rng.standard_normal(options.dimension);
    const auto spinup = static_cast<std::size_t>(std::llround(options.spinup_time / options.dt));

    ProblemSetup s;
    s.name = "lorenz96";
    s.truth = model->integrate(x0, spinup);
    s.model = std::move(model);
    s.gamma = SpdMatrix::scaled_identity(options.dimension, options.sigma * options.sigma);
    s.initial_dist = GaussianMV{Vector::Zero(options.dimension), SpdMatrix::identity(options.dimension)};
    return s;
}

ProblemSetup make_darcy_setup(const DarcyOptions& options) {
    auto model = std::make_shared<DarcyModel>(options.model);
    const std::size_t d = model->input_dim();
    ProblemSetup s;
    s.name = "darcy";
    s.truth = Vector::Constant(static_cast<Eigen::Index>(d), options.truth_value);
    const Vector clean = model->evaluate(s.truth);
    const double sigma = options.sigma_fraction * clean.cwiseAbs().maxCoeff();
    s.gamma = SpdMatrix::scaled_identity(model->output_dim(), sigma * sigma);
    s.initial_dist = GaussianMV{Vector::Zero(d), SpdMatrix::identity(d)};
    s.model = std::move(model);
    return s;
}

ProblemSetup make_linear_setup(const LinearOptions& options) {
    SeededRng rng(options.matrix_seed, 0x6c696eull);
    Matrix a(options.output_dim, options.input_dim);
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) = rng.standard_normal();
    }
    ProblemSetup s;
    s.name = "linear";
    s.model = std::make_shared<LinearModel>(std::move(a));
    s.gamma = SpdMatrix::scaled_identity(options.output_dim, options.sigma * options.sigma);
    s.truth = Vector::Ones(options.input_dim);
    s.initial_dist = GaussianMV{Vector::Zero(options.input_dim), SpdMatrix::identity(options.input_dim)};
    return s;
}

}  // namespace ki
