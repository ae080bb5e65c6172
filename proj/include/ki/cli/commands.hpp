#pragma once

#include "ki/cli/config.hpp"

#include <iosfwd>
#include <string>

namespace ki::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDiverged = 1;
inline constexpr int kExitConfig = 2;

/// `<output>.records.csv` and `<output>.summary.csv`.
std::string records_path(const RunConfig& config);
std::string summary_path(const RunConfig& config);

/// Runs the algorithm x dt x schedule grid, writes both CSVs and prints one
/// digest line per cell to `out`. Exit codes: 0 ok, 1 some cell had every
/// trial diverge, 2 invalid configuration (nothing is written).
int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Like cmd_run over the sweep grid for `axis`.
int cmd_sweep(const RunConfig& config, SweepAxis axis, std::ostream& out, std::ostream& err);

/// Reads a records CSV and writes an SVG of mean log-cost with stderr ribbons.
/// Malformed or empty input gives exit 2.
int cmd_plot(const std::string& csv_path, const std::string& svg_path, std::ostream& out, std::ostream& err);

}  // namespace ki::cli
