#pragma once

#include "ki/core/ensemble.hpp"
#include "ki/core/errors.hpp"
#include "ki/core/linalg.hpp"
#include "ki/models/forward_model.hpp"
#include "ki/processes/momentum.hpp"
#include "ki/processes/updates.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ki {

enum class Algorithm { Eki, Etki, Uki };

std::string algorithm_name(Algorithm a);
Algorithm parse_algorithm(const std::string& text);

/// Particle norm beyond which a run is declared diverged.
inline constexpr double kDivergenceNorm = 1e12;

/// State of the EKI/ETKI iteration; `current` is u_j and `previous` u_{j-1}.
struct EkiState {
    Ensemble current;
    Ensemble previous;
    std::size_t iteration = 0;
    double dt = 1.0;
    MomentumSchedule schedule = NoAcceleration{};
    Algorithm algorithm = Algorithm::Eki;

    static EkiState initial(Ensemble u0, Algorithm algorithm, MomentumSchedule schedule, double dt = 1.0);
};

struct UkiState {
    Vector mean;
    SpdMatrix cov;
    std::optional<Ensemble> prev_sigma;
    std::size_t iteration = 0;
    UkiHyper hyper;
    MomentumSchedule schedule = NoAcceleration{};
};

/// One driver iteration: the ensemble the model was run on and what came out.
struct EnsembleStep {
    std::size_t iteration = 0;
    double lambda = 0.0;
    Ensemble evaluated;
    Matrix forward;
    Ensemble updated;
};

struct UkiStep {
    std::size_t iteration = 0;
    double lambda = 0.0;
    Ensemble evaluated;
    Matrix forward;
    Vector mean;
    SpdMatrix cov;
};

struct RunOptions {
    /// Workers for the per-iteration forward sweep; results do not depend on it.
    std::size_t workers = 1;
    bool keep_history = true;
};

template <class State, class Step>
struct RunResult {
    State state;
    std::vector<Step> history;
    /// Set when an iteration failed; `state` and `history` then hold the last good values.
    std::optional<Diverged> failure;

    bool completed() const noexcept { return !failure.has_value(); }
};

using EkiRunResult = RunResult<EkiState, EnsembleStep>;
using UkiRunResult = RunResult<UkiState, UkiStep>;

using EnsembleObserver = std::function<void(const EnsembleStep&)>;
using UkiObserver = std::function<void(const UkiStep&)>;

/**
 * Iteration 0 applies the plain update to u_0. Each of the following J
 * iterations computes lambda_j, nudges, evaluates the model once per column of
 * the nudged ensemble and applies the update, so J iterations cost exactly
 * N (J + 1) model evaluations whatever the schedule.
 */
EkiRunResult run_iterations(EkiState state, const ForwardModel& model, const Vector& y, const SpdMatrix& gamma,
                            std::size_t iterations, const RunOptions& options = {},
                            const EnsembleObserver& observer = {});

UkiRunResult run_iterations(UkiState state, const ForwardModel& model, const Vector& y, const SpdMatrix& gamma,
                            std::size_t iterations, const RunOptions& options = {},
                            const UkiObserver& observer = {});

/// Column-parallel forward sweep with a fixed column-to-worker assignment.
Matrix evaluate_parallel(const ForwardModel& model, const Matrix& columns, std::size_t workers);

}  // namespace ki
