#pragma once

#include "ki/harness/problem.hpp"
#include "ki/processes/driver.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ki {

/// Random streams derived from a trial seed.
inline constexpr std::uint64_t kDataStream = 1;
inline constexpr std::uint64_t kEnsembleStream = 2;

/// log-cost assigned to a zero misfit.
inline constexpr double kLogCostFloor = -690.7755278982137;  // log(1e-300)

double log_cost(double cost);

struct TrialConfig {
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::Eki;
    MomentumSchedule schedule = NoAcceleration{};
    std::size_t ensemble_size = 10;
    std::size_t iterations = 20;
    double dt = 1.0;
    double uki_alpha = 1.0;

    void validate() const;
};

enum class TrialStatus { Completed, Diverged };

struct ConvergenceRecord {
    TrialConfig config;
    /// Entry j is the log-cost of the mean forward evaluation at iteration j;
    /// J+1 entries for a completed trial, fewer if it diverged.
    std::vector<double> log_cost;
    Vector terminal_mean;
    TrialStatus status = TrialStatus::Completed;
    std::size_t diverged_at = 0;
    std::string message;

    bool completed() const noexcept { return status == TrialStatus::Completed; }
};

/**
 * Runs one trial on an already realized problem. EKI/ETKI draw the initial
 * ensemble from `initial_dist` on the trial's ensemble stream; UKI starts from
 * the prior's deterministic sigma points with r = m, Sigma_nu = 2 Gamma and
 * Sigma_omega = (2 - alpha^2) C. Divergence is recorded, not thrown.
 */
ConvergenceRecord run_trial(const InverseProblem& problem, const TrialConfig& config,
                            const RunOptions& options = {});

struct ExperimentSummary {
    std::vector<double> mean_log_cost;
    std::vector<double> stderr_log_cost;
    std::size_t trial_count = 0;
    std::size_t completed_count = 0;
};

/// Per-iteration mean and standard error (sample std / sqrt(count)) over the
/// completed records. Throws if none completed or lengths differ.
ExperimentSummary summarize_series(const std::vector<ConvergenceRecord>& records);

/// A grid cell is a trial configuration without its seed.
struct CellSpec {
    Algorithm algorithm = Algorithm::Eki;
    MomentumSchedule schedule = NoAcceleration{};
    std::size_t ensemble_size = 10;
    std::size_t iterations = 20;
    double dt = 1.0;
    double uki_alpha = 1.0;

    TrialConfig trial(std::uint64_t seed) const;
};

struct CellResult {
    std::size_t cell_id = 0;
    CellSpec spec;
    std::vector<ConvergenceRecord> records;
    std::optional<ExperimentSummary> summary;  ///< absent when every trial diverged
    std::size_t n_diverged = 0;

    bool all_diverged() const noexcept { return !summary.has_value(); }
};

struct ExperimentOptions {
    std::size_t n_trials = 1;
    std::uint64_t base_seed = 0;
    /// Parallel trial workers; 0 = hardware concurrency.
    std::size_t workers = 1;
};

/**
 * Trial t of every cell uses seed base_seed + t, so the data realization and
 * the initial ensemble are shared across cells (paired comparison). Output
 * does not depend on the worker count.
 */
std::vector<CellResult> run_experiment(const ProblemSetup& setup, const std::vector<CellSpec>& grid,
                                       const ExperimentOptions& options);

/// Worker count from KI_THREADS (0 or unset = hardware concurrency).
std::size_t workers_from_env();

}  // namespace ki
