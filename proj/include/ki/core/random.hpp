#pragma once

#include "ki/core/ensemble.hpp"
#include "ki/core/linalg.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace ki {

/**
 * Per-trial random stream. A 64-bit Mersenne twister seeded through
 * splitmix64(seed, stream); normals come from the Box-Muller transform with
 * both outputs consumed. Same seed and call sequence give the same bits.
 */
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const noexcept { return seed_; }

    /// Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double standard_normal();
    Vector standard_normal(std::size_t n);

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::optional<double> cached_normal_;
};

struct Gaussian1D {
    double mean;
    double variance;
};

/// exp(X) with X ~ N(log_mean, log_variance).
struct Lognormal1D {
    double log_mean;
    double log_variance;
};

struct GaussianMV {
    Vector mean;
    SpdMatrix cov;
};

using Marginal = std::variant<Gaussian1D, Lognormal1D>;

/// Independent 1D marginals stacked row by row.
struct Product {
    std::vector<Marginal> factors;
};

using DistributionSpec = std::variant<Gaussian1D, Lognormal1D, GaussianMV, Product>;

std::size_t distribution_dim(const DistributionSpec& spec);
Vector distribution_mean(const DistributionSpec& spec);
SpdMatrix distribution_covariance(const DistributionSpec& spec);

/// Draws `count` independent columns from `spec`.
Ensemble sample(const DistributionSpec& spec, std::size_t count, SeededRng& rng);

/// Validates variances > 0 (covariances are checked when factorized).
void validate(const DistributionSpec& spec);

}  // namespace ki
