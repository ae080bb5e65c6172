#include "ki/cli/csv.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace ki::cli {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

template <class T>
T parse_field(const std::string& text, std::size_t line, const char* name) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw CsvError("line " + std::to_string(line) + ": bad " + name + " '" + text + "'");
    }
    return value;
}

void write_comment(std::ostream& out, const std::optional<std::string>& comment) {
    if (comment) out << "# " << *comment << '\n';
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ec == std::errc() ? ptr : buf.data());
}

std::size_t effective_ensemble_size(const CellResult& cell) {
    if (cell.spec.algorithm == Algorithm::Uki && !cell.records.empty()) {
        return 2 * static_cast<std::size_t>(cell.records.front().terminal_mean.size()) + 1;
    }
    return cell.spec.ensemble_size;
}

void write_records_csv(std::ostream& out, const std::vector<CellResult>& cells,
                       const std::optional<std::string>& comment) {
    write_comment(out, comment);
    out << kRecordsHeader << '\n';
    for (const auto& cell : cells) {
        const std::string prefix = std::to_string(cell.cell_id) + ',' + algorithm_name(cell.spec.algorithm) + ',' +
                                   schedule_name(cell.spec.schedule) + ',' +
                                   std::to_string(effective_ensemble_size(cell)) + ',' + format_double(cell.spec.dt);
        for (std::size_t t = 0; t < cell.records.size(); ++t) {
            const auto& r = cell.records[t];
            const std::string status =
                r.completed() ? std::string("completed") : "diverged@" + std::to_string(r.diverged_at);
            for (std::size_t j = 0; j < r.log_cost.size(); ++j) {
                out << prefix << ',' << t << ',' << r.config.seed << ',' << j << ',' << format_double(r.log_cost[j])
                    << ',' << status << '\n';
            }
        }
    }
}

void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells,
                       const std::optional<std::string>& comment) {
    write_comment(out, comment);
    out << kSummaryHeader << '\n';
    for (const auto& cell : cells) {
        if (!cell.summary) continue;
        const auto& s = *cell.summary;
        for (std::size_t j = 0; j < s.mean_log_cost.size(); ++j) {
            out << cell.cell_id << ',' << algorithm_name(cell.spec.algorithm) << ','
                << schedule_name(cell.spec.schedule) << ',' << effective_ensemble_size(cell) << ','
                << format_double(cell.spec.dt) << ',' << j << ',' << format_double(s.mean_log_cost[j]) << ','
                << format_double(s.stderr_log_cost[j]) << ',' << s.completed_count << ',' << cell.n_diverged
                << '\n';
        }
    }
}

std::vector<RecordRow> read_records_csv(std::istream& in) {
    std::vector<RecordRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kRecordsHeader) {
                throw CsvError("line " + std::to_string(line_no) + ": expected records header '" +
                               std::string(kRecordsHeader) + "'");
            }
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 10) {
            throw CsvError("line " + std::to_string(line_no) + ": expected 10 fields, found " +
                           std::to_string(f.size()));
        }
        RecordRow r;
        r.cell_id = parse_field<std::size_t>(f[0], line_no, "cell_id");
        r.algorithm = f[1];
        r.schedule = f[2];
        r.ensemble_size = parse_field<std::size_t>(f[3], line_no, "ensemble_size");
        r.dt = parse_field<double>(f[4], line_no, "dt");
        r.trial = parse_field<std::size_t>(f[5], line_no, "trial");
        r.seed = parse_field<std::uint64_t>(f[6], line_no, "seed");
        r.iteration = parse_field<std::size_t>(f[7], line_no, "iteration");
        r.log_cost = parse_field<double>(f[8], line_no, "log_cost");
        r.status = f[9];
        if (r.status != "completed" && r.status.rfind("diverged@", 0) != 0) {
            throw CsvError("line " + std::to_string(line_no) + ": bad status '" + r.status + "'");
        }
        rows.push_back(std::move(r));
    }
    if (!header_seen) {
        throw CsvError("records CSV is empty");
    }
    if (rows.empty()) {
        throw CsvError("records CSV has a header but no data rows");
    }
    return rows;
}

}  // namespace ki::cli
