#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace runline {

/// A parsed CSV file. Rows keep their 1-based source line numbers so
/// validation errors can point at the offending line.
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;

    /// Index of a header column, or throws IngestError naming the column.
    std::size_t column(const std::string& name) const;
};

/// Reads a comma-separated file with a mandatory header row. Supports
/// double-quoted fields with "" escapes. Every row must have the same field
/// count as the header; violations throw IngestError with the line number.
CsvTable read_csv(const std::string& path);

/// Splits one CSV line into fields (quote-aware).
std::vector<std::string> split_csv_line(const std::string& line);

/// Quotes a field only when it contains a comma, quote or newline.
std::string csv_escape(const std::string& field);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

/// Strict numeric parsers: the whole field must be consumed.
/// `where` is prepended to error messages ("file.csv line 12 column home_score").
double parse_double(const std::string& field, const std::string& where);
long long parse_int(const std::string& field, const std::string& where);

/// Fixed-precision formatting used for every CSV/JSON artifact the library
/// writes, so repeated runs are byte-identical.
std::string format_double(double value, int precision = 6);

}  // namespace runline
