// ki: run ensemble Kalman inversion experiments, sweeps and plots.

#include "ki/cli/commands.hpp"
#include "ki/cli/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using Overrides = std::vector<std::pair<std::string, std::string>>;

struct ExperimentFlags {
    std::string config_path;
    std::vector<std::string> sets;
    std::optional<std::string> trials, seed, out, iterations, problem, algorithms, schedules, ensemble_size, dt;
    bool no_header_comment = false;

    void attach(CLI::App* app) {
        app->add_option("--config,-c", config_path, "INI configuration file")->check(CLI::ExistingFile);
        app->add_option("--trials", trials, "experiment.n_trials");
        app->add_option("--seed", seed, "experiment.base_seed");
        app->add_option("--out,-o", out, "output prefix (writes <out>.records.csv and <out>.summary.csv)");
        app->add_option("--iterations", iterations, "experiment.iterations");
        app->add_option("--problem", problem, "exp_sin | lorenz96 | darcy | linear");
        app->add_option("--algorithms", algorithms, "comma list of eki, etki, uki");
        app->add_option("--schedules", schedules, "comma list of none, original, recursive, constant:<c>");
        app->add_option("--ensemble-size", ensemble_size, "experiment.ensemble_size");
        app->add_option("--dt", dt, "comma list of step sizes");
        app->add_option("--set", sets, "override any key: section.key=value (repeatable)");
        app->add_flag("--no-header-comment", no_header_comment, "omit the timestamped first line of the CSVs");
    }

    Overrides overrides() const {
        Overrides o;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ki::cli::ConfigError("--set expects section.key=value, got '" + s + "'");
            o.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
        const auto put = [&o](const char* key, const std::optional<std::string>& v) {
            if (v) o.emplace_back(key, *v);
        };
        put("problem.name", problem);
        put("experiment.n_trials", trials);
        put("experiment.base_seed", seed);
        put("experiment.output", out);
        put("experiment.iterations", iterations);
        put("experiment.algorithms", algorithms);
        put("experiment.schedules", schedules);
        put("experiment.ensemble_size", ensemble_size);
        put("experiment.dt", dt);
        if (no_header_comment) o.emplace_back("experiment.header_comment", "false");
        return o;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ensemble Kalman inversion with Nesterov momentum: experiments, sweeps and plots"};
    app.require_subcommand(1);

    ExperimentFlags run_flags;
    auto* run = app.add_subcommand("run", "run the algorithm x dt x schedule grid");
    run_flags.attach(run);

    ExperimentFlags sweep_flags;
    std::string axis;
    std::optional<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "sweep one axis (ensemble_size, dt or schedule)");
    sweep_flags.attach(sweep);
    sweep->add_option("--axis", axis, "ensemble_size | dt | schedule")->required();
    sweep->add_option("--values", values, "comma list replacing sweep.<axis>");

    std::string csv_path;
    std::string svg_path;
    auto* plot = app.add_subcommand("plot", "render a records CSV to SVG");
    plot->add_option("records", csv_path, "records CSV written by run or sweep")->required();
    plot->add_option("svg", svg_path, "output SVG path (default: <records>.svg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : ki::cli::kExitConfig;
    }

    using namespace ki::cli;
    try {
        if (*run) {
            const auto config = parse_config(run_flags.config_path, run_flags.overrides());
            return cmd_run(config, std::cout, std::cerr);
        }
        if (*sweep) {
            const SweepAxis which = parse_sweep_axis(axis);
            auto overrides = sweep_flags.overrides();
            if (values) overrides.emplace_back("sweep." + sweep_axis_name(which), *values);
            const auto config = parse_config(sweep_flags.config_path, overrides);
            return cmd_sweep(config, which, std::cout, std::cerr);
        }
        if (svg_path.empty()) svg_path = csv_path + ".svg";
        return cmd_plot(csv_path, svg_path, std::cout, std::cerr);
    } catch (const ConfigError& e) {
        std::cerr << "ki: " << e.what() << '\n';
        return kExitConfig;
    }
}
