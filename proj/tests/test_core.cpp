#include "oracles.hpp"

#include "ki/core/ensemble.hpp"
#include "ki/core/errors.hpp"
#include "ki/core/linalg.hpp"
#include "ki/core/random.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

using namespace ki;

namespace {

Matrix cols(std::initializer_list<std::initializer_list<double>> columns) {
    const auto n = static_cast<Eigen::Index>(columns.size());
    const auto d = static_cast<Eigen::Index>(columns.begin()->size());
    Matrix m(d, n);
    Eigen::Index c = 0;
    for (const auto& col : columns) {
        Eigen::Index r = 0;
        for (const double v : col) m(r++, c) = v;
        ++c;
    }
    return m;
}

Matrix random_matrix(SeededRng& rng, Eigen::Index rows, Eigen::Index cols_) {
    Matrix m(rows, cols_);
    for (Eigen::Index j = 0; j < cols_; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.standard_normal();
    }
    return m;
}

SpdMatrix random_spd(SeededRng& rng, Eigen::Index n) {
    const Matrix b = random_matrix(rng, n, n);
    return SpdMatrix(symmetrized(b * b.transpose() + static_cast<double>(n) * Matrix::Identity(n, n)));
}

double rel_frobenius(const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("ensemble rejects empty and non-finite particles") {
    CHECK_THROWS(Ensemble(Matrix(0, 0)));
    Matrix bad = Matrix::Ones(2, 3);
    bad(1, 2) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Ensemble{bad}, NonFiniteValue);
    bad(1, 2) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Ensemble{bad}, NonFiniteValue);
}

TEST_CASE("ensemble_mean examples") {
    CHECK(ensemble_mean(Ensemble(cols({{-1}, {1}})))(0) == doctest::Approx(0.0));
    const Vector m = ensemble_mean(Ensemble(cols({{1, 2}, {3, 4}})));
    CHECK(m(0) == doctest::Approx(2.0));
    CHECK(m(1) == doctest::Approx(3.0));
    const Matrix repeated = Vector::LinSpaced(4, -1.0, 2.0).replicate(1, 7);
    CHECK((ensemble_mean(Ensemble(repeated)) - repeated.col(0)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("anomalies examples") {
    const Ensemble e(cols({{-1}, {1}}));
    const Matrix sample = anomalies(e, Normalization::Sample);
    CHECK(sample(0, 0) == doctest::Approx(-1.0));
    CHECK(sample(0, 1) == doctest::Approx(1.0));
    const Matrix pop = anomalies(e, Normalization::Population);
    CHECK(pop(0, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)));
    CHECK(pop(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(anomalies(Ensemble(Matrix::Constant(3, 5, 4.2)), Normalization::Sample).isZero(0.0));
}

TEST_CASE("anomalies have zero row sums") {
    SeededRng rng(11);
    for (int t = 0; t < 20; ++t) {
        const Matrix u = random_matrix(rng, 4, 6) * 10.0;
        for (const auto norm : {Normalization::Population, Normalization::Sample}) {
            CHECK(anomalies(u, norm).rowwise().sum().cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("cross_cov examples") {
    const Matrix u = cols({{-1}, {1}});
    CHECK(cross_cov(u, u, Normalization::Population)(0, 0) == doctest::Approx(1.0));
    CHECK(cross_cov(u, u, Normalization::Sample)(0, 0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(cross_cov(Matrix::Ones(2, 3), Matrix::Ones(2, 4), Normalization::Population),
                    DimensionMismatch);
}

TEST_CASE("cross_cov is linear in its second argument") {
    SeededRng rng(5);
    for (int t = 0; t < 25; ++t) {
        const Matrix u = random_matrix(rng, 3, 4);
        const Matrix a = random_matrix(rng, 5, 3);
        for (const auto norm : {Normalization::Population, Normalization::Sample}) {
            const Matrix lhs = cross_cov(u, a * u, norm);
            const Matrix rhs = cross_cov(u, u, norm) * a.transpose();
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("cross_cov of an ensemble with itself is symmetric PSD") {
    SeededRng rng(8);
    for (int t = 0; t < 25; ++t) {
        const Matrix u = random_matrix(rng, 6, 4);
        const Matrix c = cross_cov(u, u, Normalization::Population);
        CHECK((c - c.transpose()).cwiseAbs().maxCoeff() < 1e-14);
        const Eigen::SelfAdjointEigenSolver<Matrix> es(c);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12 * c.trace());
    }
}

TEST_CASE("SpdMatrix validation") {
    CHECK_THROWS(SpdMatrix(Matrix::Ones(2, 3)));
    Matrix asym(2, 2);
    asym << 1, 0.5, 0.4, 1;
    CHECK_THROWS(SpdMatrix(asym));
    Matrix nan = Matrix::Identity(2, 2);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(SpdMatrix{nan}, NonFiniteValue);
}

TEST_CASE("cholesky_lower examples") {
    CHECK(cholesky_lower(SpdMatrix(Matrix::Constant(1, 1, 4.0)))(0, 0) == doctest::Approx(2.0));
    CHECK(cholesky_lower(SpdMatrix::identity(4)).isIdentity(1e-15));
    Matrix m(2, 2);
    m << 2, 1, 1, 2;
    const Matrix l = cholesky_lower(SpdMatrix(m));
    CHECK(l(0, 0) == doctest::Approx(std::sqrt(2.0)));
    CHECK(l(1, 0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(l(1, 1) == doctest::Approx(std::sqrt(1.5)));
    CHECK(l(0, 1) == 0.0);
    CHECK(rel_frobenius(l * l.transpose(), m) < 1e-12);
}

TEST_CASE("cholesky_lower rejects indefinite input") {
    Matrix m(2, 2);
    m << 1, 2, 2, 1;
    CHECK_THROWS_AS(cholesky_lower(SpdMatrix(m)), NotPositiveDefinite);
    CHECK_THROWS_AS(cholesky_lower(SpdMatrix(Matrix::Zero(3, 3))), NotPositiveDefinite);
}

TEST_CASE("sym_sqrt examples") {
    CHECK(sym_sqrt(SpdMatrix::identity(3)).matrix().isIdentity(1e-14));
    Matrix diag(2, 2);
    diag << 4, 0, 0, 9;
    const Matrix s = sym_sqrt(SpdMatrix(diag)).matrix();
    CHECK(s(0, 0) == doctest::Approx(2.0));
    CHECK(s(1, 1) == doctest::Approx(3.0));
    CHECK(std::abs(s(0, 1)) < 1e-14);

    Matrix omega(2, 2);
    omega << 2, 1, 1, 2;
    omega /= 3.0;
    const double r3 = 1.0 / std::sqrt(3.0);
    Matrix expected(2, 2);
    expected << 1 + r3, 1 - r3, 1 - r3, 1 + r3;
    expected *= 0.5;
    CHECK((sym_sqrt(SpdMatrix(omega)).matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("sym_sqrt clamps round-off negatives and rejects real negatives") {
    Matrix tiny(2, 2);
    tiny << 1, 0, 0, -1e-14;
    const Matrix s = sym_sqrt(SpdMatrix(tiny)).matrix();
    CHECK(s(1, 1) == 0.0);
    Matrix neg(2, 2);
    neg << 1, 0, 0, -1e-3;
    CHECK_THROWS_AS(sym_sqrt(SpdMatrix(neg)), NotPositiveDefinite);
}

TEST_CASE("factorizations reproduce random SPD matrices up to size 50") {
    SeededRng rng(21);
    for (const Eigen::Index n : {1, 2, 5, 17, 50}) {
        const SpdMatrix m = random_spd(rng, n);
        const Matrix l = cholesky_lower(m);
        CHECK(rel_frobenius(l * l.transpose(), m.matrix()) < 1e-10);
        CHECK(l.isLowerTriangular(0.0));
        const Matrix s = sym_sqrt(m).matrix();
        CHECK((s - s.transpose()).cwiseAbs().maxCoeff() < 1e-12 * s.norm());
        CHECK(rel_frobenius(s * s, m.matrix()) < 1e-10);
    }
}

TEST_CASE("spd_solve examples and inverse oracle") {
    Vector b(3);
    b << 1, -2, 3;
    CHECK((spd_solve(SpdMatrix::identity(3), b) - b).norm() == 0.0);
    CHECK(spd_solve(SpdMatrix(Matrix::Constant(1, 1, 2.0)), Vector(Vector::Constant(1, 4.0)))(0) == doctest::Approx(2.0));

    SeededRng rng(3);
    for (int t = 0; t < 10; ++t) {
        const SpdMatrix a = random_spd(rng, 5);
        const Matrix rhs = random_matrix(rng, 5, 3);
        const Matrix x = spd_solve(a, rhs);
        const Matrix oracle_x = oracle::naive_product(oracle::gauss_jordan_inverse(a.matrix()), rhs);
        CHECK((x - oracle_x).cwiseAbs().maxCoeff() < 1e-10);
        CHECK((a.matrix() * x - rhs).norm() <= 1e-10 * rhs.norm());
    }
    CHECK_THROWS_AS(spd_solve(SpdMatrix::identity(3), Vector(Vector::Ones(2))), DimensionMismatch);
}

TEST_CASE("seeded rng is reproducible and stream separated") {
    SeededRng a(42, 1), b(42, 1), c(42, 2), d(43, 1);
    bool differs_c = false, differs_d = false;
    for (int i = 0; i < 100; ++i) {
        const double x = a.standard_normal();
        CHECK(x == b.standard_normal());
        differs_c = differs_c || x != c.standard_normal();
        differs_d = differs_d || x != d.standard_normal();
    }
    CHECK(differs_c);
    CHECK(differs_d);
    SeededRng u(0);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("Gaussian1D law of large numbers") {
    SeededRng rng(1);
    const std::size_t n = 100000;
    const Matrix draws = sample(Gaussian1D{0.0, 1.0}, n, rng).particles();
    const double mean = draws.mean();
    const double var = (draws.array() - mean).square().sum() / static_cast<double>(n - 1);
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("Lognormal1D draws are positive with the requested log-mean") {
    SeededRng rng(2);
    const Matrix draws = sample(Lognormal1D{-1.38, 0.06}, 100000, rng).particles();
    CHECK(draws.minCoeff() > 0.0);
    const double log_mean = draws.array().log().mean();
    CHECK(std::abs(log_mean - (-1.38)) < 0.01);
    const double log_var = (draws.array().log() - log_mean).square().mean();
    CHECK(std::abs(log_var - 0.06) < 0.003);
}

TEST_CASE("Product draws one row per factor") {
    SeededRng rng(3);
    const Product spec{{Lognormal1D{0.0, 1e-6}, Gaussian1D{-50.0, 1e-6}}};
    const Ensemble e = sample(spec, 3, rng);
    CHECK(e.dim() == 2);
    CHECK(e.size() == 3);
    for (std::size_t n = 0; n < 3; ++n) {
        CHECK(e.column(n)(0) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(e.column(n)(1) == doctest::Approx(-50.0).epsilon(0.01));
    }
}

TEST_CASE("GaussianMV sample moments") {
    SeededRng rng(4);
    Matrix cov(2, 2);
    cov << 2.0, 0.6, 0.6, 1.0;
    const Vector mean = (Vector(2) << 1.0, -3.0).finished();
    const Ensemble e = sample(GaussianMV{mean, SpdMatrix(cov)}, 200000, rng);
    CHECK((ensemble_mean(e) - mean).cwiseAbs().maxCoeff() < 0.02);
    CHECK((cross_cov(e.particles(), e.particles(), Normalization::Sample) - cov).cwiseAbs().maxCoeff() < 0.03);
}

TEST_CASE("sampling is bit reproducible") {
    const Product spec{{Lognormal1D{-1.38, 0.06}, Gaussian1D{0.0, 0.5}}};
    SeededRng a(77, 2), b(77, 2);
    CHECK(sample(spec, 50, a).particles() == sample(spec, 50, b).particles());
}

TEST_CASE("distribution moments and validation") {
    const Lognormal1D ln{-1.38, 0.06};
    const double m = std::exp(-1.38 + 0.03);
    CHECK(distribution_mean(ln)(0) == doctest::Approx(m));
    CHECK(distribution_covariance(ln).matrix()(0, 0) == doctest::Approx((std::exp(0.06) - 1.0) * m * m));
    CHECK(distribution_dim(Product{{ln, Gaussian1D{0, 1}}}) == 2);
    CHECK_THROWS(validate(Gaussian1D{0.0, 0.0}));
    CHECK_THROWS(validate(Lognormal1D{0.0, -1.0}));
    SeededRng rng(0);
    CHECK_THROWS(sample(Gaussian1D{0.0, 1.0}, 0, rng));
}
