#include "ki/processes/driver.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>
#include <thread>

namespace ki {

namespace {

void guard_ensemble(const Matrix& particles, std::size_t iteration) {
    if (!particles.allFinite()) {
        throw Diverged(iteration, "non-finite particle at iteration " + std::to_string(iteration));
    }
    const double worst = particles.colwise().norm().maxCoeff();
    if (worst > kDivergenceNorm) {
        throw Diverged(iteration, "particle norm " + std::to_string(worst) + " exceeds divergence bound at iteration " +
                                      std::to_string(iteration));
    }
}

void guard_uki(const Vector& mean, const Matrix& cov, std::size_t iteration) {
    if (!mean.allFinite() || !cov.allFinite()) {
        throw Diverged(iteration, "non-finite UKI moments at iteration " + std::to_string(iteration));
    }
    if (mean.norm() > kDivergenceNorm) {
        throw Diverged(iteration, "UKI mean exceeds divergence bound at iteration " + std::to_string(iteration));
    }
}

Ensemble apply_update(Algorithm algorithm, const Ensemble& v, const Matrix& gv, const Vector& y,
                      const SpdMatrix& gamma, double dt) {
    switch (algorithm) {
        case Algorithm::Eki: return eki_update(v, gv, y, gamma, dt);
        case Algorithm::Etki: return etki_compute_increment(v, gv, y, gamma);
        case Algorithm::Uki: break;
    }
    throw std::invalid_argument("ensemble driver does not run UKI");
}

// Runtime failures of an iteration become a recorded divergence; contract
// violations (dimension mismatch, bad arguments) still propagate.
template <class Body>
std::optional<Diverged> guarded(std::size_t iteration, Body&& body) {
    try {
        body();
    } catch (const Diverged& e) {
        return Diverged(iteration, e.what());
    } catch (const NotPositiveDefinite& e) {
        return Diverged(iteration, e.what());
    } catch (const Overflow& e) {
        return Diverged(iteration, e.what());
    } catch (const NonFiniteValue& e) {
        return Diverged(iteration, e.what());
    } catch (const SolverError& e) {
        return Diverged(iteration, e.what());
    }
    return std::nullopt;
}

void check_problem(const ForwardModel& model, std::size_t d, const Vector& y, const SpdMatrix& gamma) {
    if (model.input_dim() != d) {
        throw DimensionMismatch("model input dimension " + std::to_string(model.input_dim()) +
                                " does not match parameter dimension " + std::to_string(d));
    }
    if (model.output_dim() != static_cast<std::size_t>(y.size()) || gamma.size() != model.output_dim()) {
        throw DimensionMismatch("model output, data and noise covariance dimensions disagree");
    }
}

}  // namespace

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::Eki: return "eki";
        case Algorithm::Etki: return "etki";
        case Algorithm::Uki: return "uki";
    }
    return "unknown";
}

Algorithm parse_algorithm(const std::string& text) {
    if (text == "eki") return Algorithm::Eki;
    if (text == "etki") return Algorithm::Etki;
    if (text == "uki") return Algorithm::Uki;
    throw std::invalid_argument("unknown algorithm '" + text + "' (expected eki, etki, uki)");
}

EkiState EkiState::initial(Ensemble u0, Algorithm algorithm, MomentumSchedule schedule, double dt) {
    if (algorithm == Algorithm::Uki) {
        throw std::invalid_argument("EkiState cannot drive UKI");
    }
    EkiState s;
    s.previous = u0;
    s.current = std::move(u0);
    s.iteration = 0;
    s.dt = dt;
    s.schedule = schedule;
    s.algorithm = algorithm;
    return s;
}

Matrix evaluate_parallel(const ForwardModel& model, const Matrix& columns, std::size_t workers) {
    const auto n = static_cast<std::size_t>(columns.cols());
    if (workers <= 1 || n <= 1) {
        return evaluate_columns(model, columns);
    }
    workers = std::min(workers, n);
    Matrix out(static_cast<Eigen::Index>(model.output_dim()), columns.cols());
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t c = w; c < n; c += workers) {
                    const auto ci = static_cast<Eigen::Index>(c);
                    out.col(ci) = model.evaluate(columns.col(ci));
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

EkiRunResult run_iterations(EkiState state, const ForwardModel& model, const Vector& y, const SpdMatrix& gamma,
                            std::size_t iterations, const RunOptions& options, const EnsembleObserver& observer) {
    check_problem(model, state.current.dim(), y, gamma);
    if (!state.current.same_shape(state.previous)) {
        throw DimensionMismatch("EkiState: current and previous ensembles differ in shape");
    }
    EkiRunResult result{state, {}, std::nullopt};
    const std::size_t first = state.iteration;

    for (std::size_t it = 0; it <= iterations; ++it) {
        const std::size_t j = first + it;
        auto failure = guarded(j, [&] {
            EkiState& s = result.state;
            double lambda = 0.0;
            MomentumSchedule next = s.schedule;
            Ensemble evaluated = s.current;
            if (j >= 1) {
                auto step = momentum_coefficient(s.schedule, j);
                lambda = step.lambda;
                next = step.next;
                evaluated = nesterov_nudge(s.current, s.previous, lambda);
            }
            Matrix forward = evaluate_parallel(model, evaluated.particles(), options.workers);
            Ensemble updated = apply_update(s.algorithm, evaluated, forward, y, gamma, s.dt);
            guard_ensemble(updated.particles(), j);

            EnsembleStep record{j, lambda, std::move(evaluated), std::move(forward), updated};
            if (observer) observer(record);
            if (options.keep_history) result.history.push_back(std::move(record));

            s.previous = std::move(s.current);
            s.current = std::move(updated);
            s.schedule = next;
            s.iteration = j + 1;
        });
        if (failure) {
            result.failure = std::move(failure);
            break;
        }
    }
    return result;
}

UkiRunResult run_iterations(UkiState state, const ForwardModel& model, const Vector& y, const SpdMatrix& gamma,
                            std::size_t iterations, const RunOptions& options, const UkiObserver& observer) {
    const auto d = static_cast<std::size_t>(state.mean.size());
    check_problem(model, d, y, gamma);
    state.hyper.validate(d, model.output_dim());
    if (state.cov.size() != d) {
        throw DimensionMismatch("UkiState: covariance does not match mean");
    }
    UkiRunResult result{state, {}, std::nullopt};
    const std::size_t first = state.iteration;

    for (std::size_t it = 0; it <= iterations; ++it) {
        const std::size_t j = first + it;
        auto failure = guarded(j, [&] {
            UkiState& s = result.state;
            Ensemble sigma = uki_generate_ensemble(s.mean, s.cov, s.hyper);
            double lambda = 0.0;
            MomentumSchedule next = s.schedule;
            Ensemble evaluated = sigma;
            if (j >= 1 && s.prev_sigma) {
                auto step = momentum_coefficient(s.schedule, j);
                lambda = step.lambda;
                next = step.next;
                evaluated = nesterov_nudge(sigma, *s.prev_sigma, lambda);
            }
            Matrix forward = evaluate_parallel(model, evaluated.particles(), options.workers);
            MeanCov moments = uki_update_mean_cov(evaluated, forward, y, s.hyper.sigma_nu);
            guard_uki(moments.mean, moments.cov.matrix(), j);

            UkiStep record{j, lambda, std::move(evaluated), std::move(forward), moments.mean, moments.cov};
            if (observer) observer(record);
            if (options.keep_history) result.history.push_back(std::move(record));

            s.mean = std::move(moments.mean);
            s.cov = std::move(moments.cov);
            s.prev_sigma = std::move(sigma);
            s.schedule = next;
            s.iteration = j + 1;
        });
        if (failure) {
            result.failure = std::move(failure);
            break;
        }
    }
    return result;
}

}  // namespace ki
