#pragma once

#include "ki/core/ensemble.hpp"

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>

namespace ki {

/// Forward map G: R^d -> R^k. Implementations are immutable after construction
/// and `evaluate` may be called concurrently.
class ForwardModel {
public:
    virtual ~ForwardModel() = default;

    virtual std::size_t input_dim() const = 0;
    virtual std::size_t output_dim() const = 0;
    virtual Vector evaluate(const Vector& u) const = 0;
    virtual std::string name() const = 0;
};

/// Evaluates `model` on every column, returning a k x N matrix.
Matrix evaluate_columns(const ForwardModel& model, const Matrix& columns);
Matrix evaluate_ensemble(const ForwardModel& model, const Ensemble& e);

/// Decorator that counts calls to `evaluate`.
class CountingModel final : public ForwardModel {
public:
    explicit CountingModel(std::shared_ptr<const ForwardModel> inner) : inner_(std::move(inner)) {}

    std::size_t input_dim() const override { return inner_->input_dim(); }
    std::size_t output_dim() const override { return inner_->output_dim(); }
    Vector evaluate(const Vector& u) const override {
        calls_.fetch_add(1, std::memory_order_relaxed);
        return inner_->evaluate(u);
    }
    std::string name() const override { return inner_->name(); }

    std::size_t calls() const noexcept { return calls_.load(std::memory_order_relaxed); }
    void reset() noexcept { calls_.store(0, std::memory_order_relaxed); }

private:
    std::shared_ptr<const ForwardModel> inner_;
    mutable std::atomic<std::size_t> calls_{0};
};

/// G(u) = A u. Oracle model for the linear-Gaussian checks.
class LinearModel final : public ForwardModel {
public:
    explicit LinearModel(Matrix a);

    std::size_t input_dim() const override { return static_cast<std::size_t>(a_.cols()); }
    std::size_t output_dim() const override { return static_cast<std::size_t>(a_.rows()); }
    Vector evaluate(const Vector& u) const override;
    std::string name() const override { return "linear"; }

    const Matrix& matrix() const noexcept { return a_; }

private:
    Matrix a_;
};

}  // namespace ki
