#pragma once

#include "ki/harness/experiment.hpp"

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ki::cli {

inline constexpr const char* kRecordsHeader =
    "cell_id,algorithm,schedule,ensemble_size,dt,trial,seed,iteration,log_cost,status";
inline constexpr const char* kSummaryHeader =
    "cell_id,algorithm,schedule,ensemble_size,dt,iteration,mean_log_cost,stderr_log_cost,n_completed,n_diverged";

class CsvError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest representation that round-trips to the same double.
std::string format_double(double value);

/// Ensemble size actually used by a cell (2d+1 for UKI).
std::size_t effective_ensemble_size(const CellResult& cell);

/// One row per (trial, iteration). `comment`, if given, is written first as "# ...".
void write_records_csv(std::ostream& out, const std::vector<CellResult>& cells,
                       const std::optional<std::string>& comment = std::nullopt);

/// One row per (cell, iteration); all-diverged cells contribute no rows.
void write_summary_csv(std::ostream& out, const std::vector<CellResult>& cells,
                       const std::optional<std::string>& comment = std::nullopt);

struct RecordRow {
    std::size_t cell_id = 0;
    std::string algorithm;
    std::string schedule;
    std::size_t ensemble_size = 0;
    double dt = 1.0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::size_t iteration = 0;
    double log_cost = 0.0;
    std::string status;
};

/// Parses a records CSV; lines starting with '#' are skipped. Throws CsvError
/// naming the line on any malformed row, and on a missing or wrong header.
std::vector<RecordRow> read_records_csv(std::istream& in);

}  // namespace ki::cli
