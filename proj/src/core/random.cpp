#include "ki/core/random.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ki {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

double marginal_mean(const Marginal& m) {
    return std::visit(overloaded{[](const Gaussian1D& g) { return g.mean; },
                                 [](const Lognormal1D& l) {
                                     return std::exp(l.log_mean + 0.5 * l.log_variance);
                                 }},
                      m);
}

double marginal_variance(const Marginal& m) {
    return std::visit(overloaded{[](const Gaussian1D& g) { return g.variance; },
                                 [](const Lognormal1D& l) {
                                     return std::expm1(l.log_variance) *
                                            std::exp(2.0 * l.log_mean + l.log_variance);
                                 }},
                      m);
}

double draw(const Marginal& m, SeededRng& rng) {
    return std::visit(overloaded{[&](const Gaussian1D& g) {
                                     return g.mean + std::sqrt(g.variance) * rng.standard_normal();
                                 },
                                 [&](const Lognormal1D& l) {
                                     return std::exp(l.log_mean +
                                                     std::sqrt(l.log_variance) * rng.standard_normal());
                                 }},
                      m);
}

void check_variance(double v) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument("distribution variance must be positive and finite");
    }
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), engine_(splitmix64(seed ^ splitmix64(stream))) {}

double SeededRng::uniform() {
    // (k + 0.5) / 2^53 never hits 0 or 1.
    const std::uint64_t bits = engine_() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double SeededRng::standard_normal() {
    if (cached_normal_) {
        const double z = *cached_normal_;
        cached_normal_.reset();
        return z;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_normal_ = radius * std::sin(angle);
    return radius * std::cos(angle);
}

Vector SeededRng::standard_normal(std::size_t n) {
    Vector z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i) {
        z(i) = standard_normal();
    }
    return z;
}

std::size_t distribution_dim(const DistributionSpec& spec) {
    return std::visit(overloaded{[](const Gaussian1D&) -> std::size_t { return 1; },
                                 [](const Lognormal1D&) -> std::size_t { return 1; },
                                 [](const GaussianMV& g) -> std::size_t { return g.mean.size(); },
                                 [](const Product& p) -> std::size_t { return p.factors.size(); }},
                      spec);
}

Vector distribution_mean(const DistributionSpec& spec) {
    return std::visit(overloaded{[](const Gaussian1D& g) -> Vector { return Vector::Constant(1, g.mean); },
                                 [](const Lognormal1D& l) -> Vector { return Vector::Constant(1, marginal_mean(l)); },
                                 [](const GaussianMV& g) { return g.mean; },
                                 [](const Product& p) {
                                     Vector m(p.factors.size());
                                     for (std::size_t i = 0; i < p.factors.size(); ++i) {
                                         m(i) = marginal_mean(p.factors[i]);
                                     }
                                     return m;
                                 }},
                      spec);
}

SpdMatrix distribution_covariance(const DistributionSpec& spec) {
    return std::visit(
        overloaded{[](const Gaussian1D& g) { return SpdMatrix::scaled_identity(1, g.variance); },
                   [](const Lognormal1D& l) { return SpdMatrix::scaled_identity(1, marginal_variance(l)); },
                   [](const GaussianMV& g) { return g.cov; },
                   [](const Product& p) {
                       Vector v(p.factors.size());
                       for (std::size_t i = 0; i < p.factors.size(); ++i) {
                           v(i) = marginal_variance(p.factors[i]);
                       }
                       return SpdMatrix::diagonal(v);
                   }},
        spec);
}

void validate(const DistributionSpec& spec) {
    std::visit(overloaded{[](const Gaussian1D& g) { check_variance(g.variance); },
                          [](const Lognormal1D& l) { check_variance(l.log_variance); },
                          [](const GaussianMV& g) {
                              if (g.cov.size() != static_cast<std::size_t>(g.mean.size())) {
                                  throw std::invalid_argument("GaussianMV mean/covariance size mismatch");
                              }
                          },
                          [](const Product& p) {
                              if (p.factors.empty()) {
                                  throw std::invalid_argument("Product distribution has no factors");
                              }
                              for (const auto& f : p.factors) {
                                  std::visit([](const auto& m) {
                                      if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Gaussian1D>) {
                                          check_variance(m.variance);
                                      } else {
                                          check_variance(m.log_variance);
                                      }
                                  }, f);
                              }
                          }},
               spec);
}

Ensemble sample(const DistributionSpec& spec, std::size_t count, SeededRng& rng) {
    if (count < 1) {
        throw std::invalid_argument("sample: count must be at least 1");
    }
    validate(spec);
    const auto n = static_cast<Eigen::Index>(count);
    return std::visit(
        overloaded{[&](const Gaussian1D& g) {
                       Matrix out(1, n);
                       for (Eigen::Index c = 0; c < n; ++c) out(0, c) = draw(g, rng);
                       return Ensemble(std::move(out));
                   },
                   [&](const Lognormal1D& l) {
                       Matrix out(1, n);
                       for (Eigen::Index c = 0; c < n; ++c) out(0, c) = draw(l, rng);
                       return Ensemble(std::move(out));
                   },
                   [&](const GaussianMV& g) {
                       const Matrix l = cholesky_lower(g.cov);
                       Matrix out(g.mean.size(), n);
                       for (Eigen::Index c = 0; c < n; ++c) {
                           out.col(c) = g.mean + l * rng.standard_normal(g.mean.size());
                       }
                       return Ensemble(std::move(out));
                   },
                   [&](const Product& p) {
                       const auto rows = static_cast<Eigen::Index>(p.factors.size());
                       Matrix out(rows, n);
                       // column-major draw order: one particle at a time
                       for (Eigen::Index c = 0; c < n; ++c) {
                           for (Eigen::Index r = 0; r < rows; ++r) {
                               out(r, c) = draw(p.factors[r], rng);
                           }
                       }
                       return Ensemble(std::move(out));
                   }},
        spec);
}

}  // namespace ki
