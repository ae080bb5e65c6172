#pragma once

#include "ki/cli/csv.hpp"

#include <string>
#include <vector>

namespace ki::cli {

struct PlotSeries {
    std::string label;
    std::vector<double> mean;
    std::vector<double> stderr_band;
};

/// Mean +/- one standard error of log-cost per cell, over completed trials.
/// Cells whose trials all diverged are dropped.
std::vector<PlotSeries> series_from_records(const std::vector<RecordRow>& rows);

/// Self-contained SVG: one line per series with a shaded +/- stderr ribbon.
std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title);

}  // namespace ki::cli
