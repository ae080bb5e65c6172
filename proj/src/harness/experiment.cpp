#include "ki/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <stdexcept>
#include <thread>

namespace ki {

double log_cost(double cost) {
    return cost > 1e-300 ? std::log(cost) : kLogCostFloor;
}

void TrialConfig::validate() const {
    if (algorithm != Algorithm::Uki && ensemble_size < 2) {
        throw std::invalid_argument("ensemble_size must be at least 2 for EKI/ETKI");
    }
    if (!(dt > 0.0)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (!(uki_alpha > 0.0 && uki_alpha <= 1.0)) {
        throw std::invalid_argument("uki_alpha must lie in (0, 1]");
    }
    if (const auto* c = std::get_if<ConstantSchedule>(&schedule); c && !(c->c >= 0.0 && c->c < 1.0)) {
        throw std::invalid_argument("constant momentum must lie in [0, 1)");
    }
}

ConvergenceRecord run_trial(const InverseProblem& problem, const TrialConfig& config, const RunOptions& options) {
    config.validate();
    problem.validate();
    ConvergenceRecord record;
    record.config = config;
    record.log_cost.reserve(config.iterations + 1);

    const auto cost_of = [&](const Matrix& forward) {
        return log_cost(misfit_cost(problem.data, column_mean(forward), problem.gamma));
    };
    RunOptions run = options;
    run.keep_history = false;
    std::optional<Diverged> failure;

    if (config.algorithm == Algorithm::Uki) {
        const GaussianPrior prior = problem.prior();
        UkiState state;
        state.mean = prior.mean;
        state.cov = prior.cov;
        state.hyper = UkiHyper::from_prior(prior.mean, prior.cov, problem.gamma, config.uki_alpha);
        state.schedule = config.schedule;
        auto result = run_iterations(std::move(state), *problem.model, problem.data, problem.gamma,
                                     config.iterations, run,
                                     [&](const UkiStep& step) { record.log_cost.push_back(cost_of(step.forward)); });
        record.terminal_mean = result.state.mean;
        failure = std::move(result.failure);
    } else {
        SeededRng rng(config.seed, kEnsembleStream);
        Ensemble u0 = sample(problem.initial_dist, config.ensemble_size, rng);
        auto state = EkiState::initial(std::move(u0), config.algorithm, config.schedule, config.dt);
        auto result = run_iterations(std::move(state), *problem.model, problem.data, problem.gamma,
                                     config.iterations, run, [&](const EnsembleStep& step) {
                                         record.log_cost.push_back(cost_of(step.forward));
                                     });
        record.terminal_mean = ensemble_mean(result.state.current);
        failure = std::move(result.failure);
    }
    if (failure) {
        record.status = TrialStatus::Diverged;
        record.diverged_at = failure->iteration();
        record.message = failure->what();
    }
    return record;
}

ExperimentSummary summarize_series(const std::vector<ConvergenceRecord>& records) {
    std::vector<const ConvergenceRecord*> done;
    for (const auto& r : records) {
        if (r.completed()) done.push_back(&r);
    }
    if (done.empty()) {
        throw std::invalid_argument("summarize_series: no completed records");
    }
    const std::size_t len = done.front()->log_cost.size();
    for (const auto* r : done) {
        if (r->log_cost.size() != len) {
            throw std::invalid_argument("summarize_series: records have different lengths");
        }
    }
    ExperimentSummary s;
    s.trial_count = records.size();
    s.completed_count = done.size();
    s.mean_log_cost.assign(len, 0.0);
    s.stderr_log_cost.assign(len, 0.0);
    const double count = static_cast<double>(done.size());
    for (std::size_t j = 0; j < len; ++j) {
        double sum = 0.0;
        for (const auto* r : done) sum += r->log_cost[j];
        const double mean = sum / count;
        double ss = 0.0;
        for (const auto* r : done) ss += (r->log_cost[j] - mean) * (r->log_cost[j] - mean);
        s.mean_log_cost[j] = mean;
        s.stderr_log_cost[j] = done.size() > 1 ? std::sqrt(ss / (count - 1.0)) / std::sqrt(count) : 0.0;
    }
    return s;
}

TrialConfig CellSpec::trial(std::uint64_t seed) const {
    return TrialConfig{seed, algorithm, schedule, ensemble_size, iterations, dt, uki_alpha};
}

std::size_t workers_from_env() {
    std::size_t requested = 0;
    if (const char* env = std::getenv("KI_THREADS"); env != nullptr) {
        requested = static_cast<std::size_t>(std::strtoull(env, nullptr, 10));
    }
    if (requested == 0) {
        requested = std::max(1u, std::thread::hardware_concurrency());
    }
    return requested;
}

std::vector<CellResult> run_experiment(const ProblemSetup& setup, const std::vector<CellSpec>& grid,
                                       const ExperimentOptions& options) {
    if (options.n_trials < 1) {
        throw std::invalid_argument("run_experiment: n_trials must be at least 1");
    }
    for (const auto& cell : grid) {
        cell.trial(0).validate();
    }
    // Realizations depend only on the trial index, never on the cell.
    std::vector<InverseProblem> problems;
    problems.reserve(options.n_trials);
    for (std::size_t t = 0; t < options.n_trials; ++t) {
        SeededRng rng(options.base_seed + t, kDataStream);
        problems.push_back(setup.realize(rng));
    }

    std::vector<CellResult> cells(grid.size());
    for (std::size_t c = 0; c < grid.size(); ++c) {
        cells[c].cell_id = c;
        cells[c].spec = grid[c];
        cells[c].records.resize(options.n_trials);
    }
    const std::size_t jobs = grid.size() * options.n_trials;
    const std::size_t workers =
        std::min(jobs, options.workers == 0 ? workers_from_env() : options.workers);

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(std::max<std::size_t>(workers, 1));
    const auto work = [&](std::size_t w) {
        try {
            for (std::size_t job = next++; job < jobs; job = next++) {
                const std::size_t c = job / options.n_trials;
                const std::size_t t = job % options.n_trials;
                cells[c].records[t] = run_trial(problems[t], grid[c].trial(options.base_seed + t));
            }
        } catch (...) {
            errors[w] = std::current_exception();
            next = jobs;
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }

    for (auto& cell : cells) {
        cell.n_diverged = static_cast<std::size_t>(
            std::count_if(cell.records.begin(), cell.records.end(), [](const auto& r) { return !r.completed(); }));
        if (cell.n_diverged < cell.records.size()) {
            cell.summary = summarize_series(cell.records);
        }
    }
    return cells;
}

}  // namespace ki
