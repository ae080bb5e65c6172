#include "ki/cli/commands.hpp"

#include "ki/cli/csv.hpp"
#include "ki/cli/plot.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ki::cli {

namespace {

std::optional<std::string> header_comment(const RunConfig& config, const std::string& command) {
    if (!config.header_comment) return std::nullopt;
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return "ki " + command + " problem=" + config.problem + " generated " + stamp;
}

void check_output_dir(const std::string& output) {
    const auto parent = std::filesystem::path(output).parent_path();
    if (!parent.empty() && !std::filesystem::is_directory(parent)) {
        throw ConfigError("output directory '" + parent.string() + "' does not exist");
    }
}

std::string digest_line(const CellResult& cell) {
    std::ostringstream line;
    line << "cell " << cell.cell_id << "  " << algorithm_name(cell.spec.algorithm) << ' '
         << schedule_name(cell.spec.schedule) << " N=" << effective_ensemble_size(cell)
         << " dt=" << format_double(cell.spec.dt) << "  ";
    const std::size_t completed = cell.records.size() - cell.n_diverged;
    if (cell.summary) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "final log-cost %.4f +/- %.4f", cell.summary->mean_log_cost.back(),
                      cell.summary->stderr_log_cost.back());
        line << buf;
    } else {
        line << "all trials diverged";
    }
    line << "  (" << completed << " completed, " << cell.n_diverged << " diverged)";
    return line.str();
}

int execute(const RunConfig& config, const std::vector<CellSpec>& grid, const std::string& command,
            std::ostream& out, std::ostream& err) {
    std::optional<ProblemSetup> setup;
    try {
        if (grid.empty()) throw ConfigError("experiment grid is empty");
        if (config.n_trials == 0) throw ConfigError("experiment.n_trials must be positive");
        for (const auto& cell : grid) cell.trial(config.base_seed).validate();
        check_output_dir(config.output);
        setup = build_setup(config);
    } catch (const std::exception& e) {
        err << "ki " << command << ": configuration error: " << e.what() << '\n';
        return kExitConfig;
    }

    ExperimentOptions options;
    options.n_trials = config.n_trials;
    options.base_seed = config.base_seed;
    options.workers = config.threads;
    const auto cells = run_experiment(*setup, grid, options);

    const auto comment = header_comment(config, command);
    std::ofstream records(records_path(config), std::ios::binary);
    std::ofstream summary(summary_path(config), std::ios::binary);
    if (!records || !summary) {
        err << "ki " << command << ": cannot write to '" << config.output << "'\n";
        return kExitConfig;
    }
    write_records_csv(records, cells, comment);
    write_summary_csv(summary, cells, comment);

    bool any_all_diverged = false;
    for (const auto& cell : cells) {
        out << digest_line(cell) << '\n';
        any_all_diverged = any_all_diverged || cell.all_diverged();
    }
    out << "wrote " << records_path(config) << " and " << summary_path(config) << '\n';
    return any_all_diverged ? kExitDiverged : kExitOk;
}

}  // namespace

std::string records_path(const RunConfig& config) { return config.output + ".records.csv"; }
std::string summary_path(const RunConfig& config) { return config.output + ".summary.csv"; }

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    return execute(config, run_grid(config), "run", out, err);
}

int cmd_sweep(const RunConfig& config, SweepAxis axis, std::ostream& out, std::ostream& err) {
    std::vector<CellSpec> grid;
    try {
        if (config.dt.empty()) throw ConfigError("experiment.dt must list at least one value");
        grid = sweep_grid(config, axis);
    } catch (const std::exception& e) {
        err << "ki sweep: configuration error: " << e.what() << '\n';
        return kExitConfig;
    }
    return execute(config, grid, "sweep", out, err);
}

int cmd_plot(const std::string& csv_path, const std::string& svg_path, std::ostream& out, std::ostream& err) {
    std::ifstream in(csv_path);
    if (!in) {
        err << "ki plot: cannot open '" << csv_path << "'\n";
        return kExitConfig;
    }
    std::vector<PlotSeries> series;
    try {
        series = series_from_records(read_records_csv(in));
    } catch (const CsvError& e) {
        err << "ki plot: " << csv_path << ": " << e.what() << '\n';
        return kExitConfig;
    }
    if (series.empty()) {
        err << "ki plot: " << csv_path << ": no cell has a completed trial\n";
        return kExitDiverged;
    }
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) {
        err << "ki plot: cannot write '" << svg_path << "'\n";
        return kExitConfig;
    }
    svg << render_svg(series, std::filesystem::path(csv_path).filename().string());
    out << "wrote " << svg_path << " (" << series.size() << " series)\n";
    return kExitOk;
}

}  // namespace ki::cli
