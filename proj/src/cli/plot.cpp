#include "ki/cli/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace ki::cli {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 220.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (const char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<PlotSeries> series_from_records(const std::vector<RecordRow>& rows) {
    struct Cell {
        std::string label;
        std::map<std::size_t, ConvergenceRecord> trials;
    };
    std::map<std::size_t, Cell> cells;
    for (const auto& row : rows) {
        auto& cell = cells[row.cell_id];
        if (cell.label.empty()) {
            cell.label = row.algorithm + " " + row.schedule + " N=" + std::to_string(row.ensemble_size) +
                         " dt=" + format_double(row.dt);
        }
        auto& rec = cell.trials[row.trial];
        rec.status = row.status == "completed" ? TrialStatus::Completed : TrialStatus::Diverged;
        if (rec.log_cost.size() <= row.iteration) rec.log_cost.resize(row.iteration + 1);
        rec.log_cost[row.iteration] = row.log_cost;
    }
    std::vector<PlotSeries> out;
    for (auto& [id, cell] : cells) {
        std::vector<ConvergenceRecord> records;
        for (auto& [t, rec] : cell.trials) records.push_back(std::move(rec));
        const bool any = std::any_of(records.begin(), records.end(), [](const auto& r) { return r.completed(); });
        if (!any) continue;
        ExperimentSummary s;
        try {
            s = summarize_series(records);
        } catch (const std::invalid_argument& e) {
            throw CsvError("cell " + std::to_string(id) + ": " + e.what());
        }
        out.push_back(PlotSeries{cell.label, std::move(s.mean_log_cost), std::move(s.stderr_log_cost)});
    }
    return out;
}

std::string render_svg(const std::vector<PlotSeries>& series, const std::string& title) {
    std::size_t max_len = 1;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& s : series) {
        max_len = std::max(max_len, s.mean.size());
        for (std::size_t j = 0; j < s.mean.size(); ++j) {
            lo = std::min(lo, s.mean[j] - s.stderr_band[j]);
            hi = std::max(hi, s.mean[j] + s.stderr_band[j]);
        }
    }
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        lo = 0.0;
        hi = 1.0;
    }
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    const double x_span = static_cast<double>(std::max<std::size_t>(max_len - 1, 1));
    const auto px = [&](double j) { return kLeft + plot_w * j / x_span; };
    const auto py = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"15\">" << escape(title) << "</text>\n";
    svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#444\"/>\n";

    for (int t = 0; t <= 5; ++t) {
        const double v = lo + (hi - lo) * t / 5.0;
        const double y = py(v);
        svg << "<line x1=\"" << kLeft - 4 << "\" y1=\"" << fmt(y) << "\" x2=\"" << kLeft << "\" y2=\"" << fmt(y)
            << "\" stroke=\"#444\"/>";
        svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt(y + 4) << "\" text-anchor=\"end\">" << fmt(v)
            << "</text>\n";
        const double j = x_span * t / 5.0;
        const double x = px(j);
        svg << "<line x1=\"" << fmt(x) << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << fmt(x) << "\" y2=\""
            << kTop + plot_h + 4 << "\" stroke=\"#444\"/>";
        svg << "<text x=\"" << fmt(x) << "\" y=\"" << kTop + plot_h + 18 << "\" text-anchor=\"middle\">"
            << std::lround(j) << "</text>\n";
    }
    svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 10
        << "\" text-anchor=\"middle\">iteration</text>\n";
    svg << "<text transform=\"translate(18 " << kTop + plot_h / 2
        << ") rotate(-90)\" text-anchor=\"middle\">log cost</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& ser = series[s];
        const char* color = kPalette[s % kPalette.size()];
        std::ostringstream band;
        for (std::size_t j = 0; j < ser.mean.size(); ++j) {
            band << fmt(px(double(j))) << ',' << fmt(py(ser.mean[j] + ser.stderr_band[j])) << ' ';
        }
        for (std::size_t j = ser.mean.size(); j-- > 0;) {
            band << fmt(px(double(j))) << ',' << fmt(py(ser.mean[j] - ser.stderr_band[j])) << ' ';
        }
        svg << "<polygon class=\"ribbon\" points=\"" << band.str() << "\" fill=\"" << color
            << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
        std::ostringstream line;
        for (std::size_t j = 0; j < ser.mean.size(); ++j) {
            line << fmt(px(double(j))) << ',' << fmt(py(ser.mean[j])) << ' ';
        }
        svg << "<polyline class=\"series\" points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";

        const double ly = kTop + 14.0 + 20.0 * static_cast<double>(s);
        const double lx = kLeft + plot_w + 14.0;
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22 << "\" y2=\"" << ly
            << "\" stroke=\"" << color << "\" stroke-width=\"3\"/>";
        svg << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4 << "\">" << escape(ser.label) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace ki::cli
