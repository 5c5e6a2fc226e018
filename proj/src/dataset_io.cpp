#include "coda/dataset_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace coda {

namespace {

std::string trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r\n");
    std::string out(text.substr(first, last - first + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> parse_double(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (*begin == '+') ++begin;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) return std::nullopt;
    return value;
}

bool all_numeric(const std::vector<std::string>& cells, std::size_t from) {
    for (std::size_t k = from; k < cells.size(); ++k) {
        if (!parse_double(cells[k])) return false;
    }
    return true;
}

} // namespace

Table read_table(std::istream& in) {
    std::vector<std::vector<std::string>> lines;
    std::vector<std::size_t> line_numbers;
    std::string line;
    for (std::size_t number = 1; std::getline(in, line); ++number) {
        if (trim(line).empty()) continue;
        lines.push_back(split_csv(line));
        line_numbers.push_back(number);
    }
    if (lines.empty()) throw Error(ErrorCode::ParseError, "input is empty");

    const std::size_t width = lines.front().size();
    for (std::size_t k = 0; k < lines.size(); ++k) {
        if (lines[k].size() != width) {
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_numbers[k]) + " has " +
                                                   std::to_string(lines[k].size()) + " fields, expected " +
                                                   std::to_string(width));
        }
    }

    Table table;
    // A row id column shows up as a non-numeric first cell in some body row;
    // the header, if any, is the first line. Decide ids from the body rows.
    const bool first_line_numeric = all_numeric(lines.front(), 0);
    bool ids = false;
    for (std::size_t k = first_line_numeric ? 0 : 1; k < lines.size(); ++k) {
        if (!parse_double(lines[k][0])) ids = true;
    }
    // Numeric ids under an explicit "id" (or blank) header cell.
    if (!first_line_numeric && (lines.front()[0].empty() || lines.front()[0] == "id")) ids = true;
    const std::size_t first_value = ids ? 1 : 0;
    table.has_row_ids = ids;
    table.has_header = !all_numeric(lines.front(), first_value);
    if (!first_line_numeric && !table.has_header && !ids) table.has_header = true;

    const std::size_t body_start = table.has_header ? 1 : 0;
    const std::size_t columns = width - first_value;
    const std::size_t rows = lines.size() - body_start;
    if (rows == 0) throw Error(ErrorCode::ParseError, "no data rows");
    if (columns == 0) throw Error(ErrorCode::ParseError, "no numeric columns");

    if (table.has_header) {
        table.column_names.assign(lines.front().begin() + static_cast<std::ptrdiff_t>(first_value),
                                  lines.front().end());
    } else {
        for (std::size_t c = 1; c <= columns; ++c) table.column_names.push_back("C" + std::to_string(c));
    }

    table.values.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(columns));
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& cells = lines[body_start + r];
        table.row_ids.push_back(ids ? cells[0] : std::to_string(r + 1));
        for (std::size_t c = 0; c < columns; ++c) {
            const auto value = parse_double(cells[first_value + c]);
            if (!value || !std::isfinite(*value)) {
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_numbers[body_start + r]) +
                                                       ": '" + cells[first_value + c] + "' is not a number");
            }
            table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = *value;
        }
    }
    return table;
}

Table read_table_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
    return read_table(in);
}

CompositionDataset dataset_from_table(const Table& table, IngestReport* report) {
    if (table.values.cols() < 2) {
        throw Error(ErrorCode::DimensionTooSmall, "a composition needs at least 2 numeric columns");
    }
    IngestReport local;
    std::vector<Composition> rows;
    rows.reserve(static_cast<std::size_t>(table.values.rows()));
    for (Eigen::Index r = 0; r < table.values.rows(); ++r) {
        const std::string& id = table.row_ids[static_cast<std::size_t>(r)];
        const Eigen::VectorXd parts = table.values.row(r).transpose();
        for (Eigen::Index c = 0; c < parts.size(); ++c) {
            if (parts[c] < 0.0) {
                throw Error(ErrorCode::NegativePart,
                            "row " + id + ": negative value in component '" +
                                table.column_names[static_cast<std::size_t>(c)] + "'",
                            static_cast<std::size_t>(c));
            }
        }
        const double deviation = std::abs(parts.sum() - 1.0);
        if (deviation > kMaxRowSumDeviation) {
            throw Error(ErrorCode::DegenerateInput,
                        "row " + id + " sums to " + format_number(parts.sum(), 7) +
                            "; compositions must be proportions summing to 1");
        }
        if (deviation > kClosureTolerance) {
            ++local.reclosed_rows;
            if (deviation > local.worst_deviation) {
                local.worst_deviation = deviation;
                local.worst_row = id;
            }
        }
        rows.emplace_back(parts);
    }
    if (report) *report = local;
    return CompositionDataset(std::move(rows), table.column_names, table.row_ids);
}

CompositionDataset read_dataset_file(const std::filesystem::path& path, IngestReport* report) {
    return dataset_from_table(read_table_file(path), report);
}

std::string format_number(double value, int significant_digits) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%#.*g", significant_digits, value);
    std::string out(buffer);
    // "%#g" leaves a bare trailing point when every digit is integral.
    if (!out.empty() && out.back() == '.') out.pop_back();
    return out;
}

void write_table_csv(std::ostream& out, const std::string& id_header,
                     const std::vector<std::string>& column_names,
                     const std::vector<std::string>& row_ids, const Eigen::MatrixXd& values,
                     int significant_digits) {
    out << id_header;
    for (const auto& name : column_names) out << ',' << name;
    out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        out << row_ids[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < values.cols(); ++c) out << ',' << format_number(values(r, c), significant_digits);
        out << '\n';
    }
}

void write_dataset_csv(std::ostream& out, const CompositionDataset& ds, int significant_digits) {
    write_table_csv(out, "id", ds.component_names(), ds.row_ids(), ds.matrix(), significant_digits);
}

} // namespace coda
