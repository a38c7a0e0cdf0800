#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "metric_cooks/objects.hpp"

namespace mcooks::cli {

/// Decimal text with 17 significant digits; parses back to the same double.
std::string format_number(double value);

/// Headerless numeric CSV. Blank lines are skipped; every other line is one
/// row. Errors are ParseError carrying the 1-based line number.
std::vector<std::vector<double>> parse_csv_rows(const std::string& text,
                                                const std::string& source = "<input>");
Matrix parse_csv_matrix(const std::string& text, const std::string& source = "<input>");

/// Response file in the layout of its space: CSV (euclidean: n x q,
/// distribution: one ragged row of samples per observation) or JSON
/// (network: [{"adjacency": [[...]]}], functional: [{"t": [...], "y": [...]}]).
ResponseSet parse_responses(const std::string& text, Space space, Metric metric,
                            const MetricOptions& options = {},
                            const std::string& source = "<input>");

std::string write_csv_matrix(const Matrix& m);
std::string write_responses(const ResponseSet& rs);

std::string read_file(const std::filesystem::path& path);
/// Writes through a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace mcooks::cli
