#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ki {

/// Raised when a Cholesky pivot or eigenvalue shows a matrix is not SPD.
class NotPositiveDefinite : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Forward model input left its documented finite domain.
class Overflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterate blew up; carries the driver iteration at which it was detected.
class Diverged : public std::runtime_error {
public:
    Diverged(std::size_t iteration, const std::string& what)
        : std::runtime_error(what), iteration_(iteration) {}

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

/// A value that must be finite (particle, covariance entry) was NaN or infinite.
class NonFiniteValue : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ki
