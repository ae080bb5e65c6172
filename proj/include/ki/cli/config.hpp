#pragma once

#include "ki/harness/experiment.hpp"
#include "ki/harness/problem.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ki::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SweepAxis { EnsembleSize, Dt, Schedule };

SweepAxis parse_sweep_axis(const std::string& text);
std::string sweep_axis_name(SweepAxis axis);

/// Everything `ki run` / `ki sweep` need. Defaults are the values below.
struct RunConfig {
    std::string problem = "exp_sin";
    std::optional<double> sigma;  ///< noise std for exp_sin / lorenz96 / linear; problem default when unset

    ExpSinOptions exp_sin;
    Lorenz96Options lorenz96;
    DarcyOptions darcy;
    LinearOptions linear;

    std::vector<Algorithm> algorithms{Algorithm::Eki};
    std::vector<MomentumSchedule> schedules{NoAcceleration{}, RecursiveSchedule{}};
    std::size_t n_trials = 5;
    std::size_t iterations = 20;
    std::size_t ensemble_size = 10;
    std::vector<double> dt{1.0};
    double uki_alpha = 1.0;
    std::uint64_t base_seed = 0;
    std::string output = "ki_results";
    std::size_t threads = 0;  ///< 0 = KI_THREADS or hardware concurrency
    bool header_comment = true;

    std::vector<std::size_t> sweep_ensemble_size{10, 200};
    std::vector<double> sweep_dt{1.0, 0.5, 0.1};
    std::vector<MomentumSchedule> sweep_schedule{NoAcceleration{}, OriginalSchedule{}, RecursiveSchedule{},
                                                 ConstantSchedule{0.9}};
};

/**
 * Reads an INI file (sections [problem], [exp_sin], [lorenz96], [darcy],
 * [linear], [experiment], [sweep]) and then applies `overrides`, each a
 * ("section.key", value) pair. Unknown keys, malformed lines and invalid
 * values raise ConfigError; parse errors carry the line number. An empty
 * path means "no file": defaults plus overrides.
 */
RunConfig parse_config(const std::string& path, const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Same, from in-memory INI text (used by tests).
RunConfig parse_config_text(const std::string& text,
                            const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Key names accepted by the parser, as "section.key".
std::vector<std::string> known_keys();

ProblemSetup build_setup(const RunConfig& config);

/// algorithms x schedules x dt for `run`.
std::vector<CellSpec> run_grid(const RunConfig& config);

/// One cell per swept value x algorithm x schedule (the schedule axis replaces the schedule list).
std::vector<CellSpec> sweep_grid(const RunConfig& config, SweepAxis axis);

}  // namespace ki::cli
