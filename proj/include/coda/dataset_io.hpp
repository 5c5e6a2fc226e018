#pragma once

// Comma-separated tables: an optional header row of column names and an
// optional leading column of row ids, both detected from non-numeric content.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coda/composition.hpp"

namespace coda {

struct Table {
    std::vector<std::string> column_names;  // numeric columns only
    std::vector<std::string> row_ids;
    Eigen::MatrixXd values;
    bool has_header = false;
    bool has_row_ids = false;
};

// Throws ParseError for ragged rows, empty input or unparseable numbers.
Table read_table(std::istream& in);
Table read_table_file(const std::filesystem::path& path);

// Rows off the unit sum by more than this are rejected as a units mistake
// (percentages, raw counts).
inline constexpr double kMaxRowSumDeviation = 0.10;

struct IngestReport {
    std::size_t reclosed_rows = 0;
    std::optional<std::string> worst_row;
    double worst_deviation = 0.0;
};

// Validates a table as compositions: at least 2 columns, nonnegative values
// (NegativePart), row sums within 10% of one (DegenerateInput). Rows off by
// more than 1e-6 are re-closed and counted in the report.
CompositionDataset dataset_from_table(const Table& table, IngestReport* report = nullptr);

CompositionDataset read_dataset_file(const std::filesystem::path& path, IngestReport* report = nullptr);

// printf "%#.<digits>g": fixed significant digits with trailing zeros kept.
std::string format_number(double value, int significant_digits);

void write_table_csv(std::ostream& out, const std::string& id_header,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::string>& row_ids, const Eigen::MatrixXd& values,
                     int significant_digits);

void write_dataset_csv(std::ostream& out, const CompositionDataset& ds, int significant_digits);

} // namespace coda
