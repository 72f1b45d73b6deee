#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace abtool {

/// Shortest round-trip decimal form, independent of the locale.
/// Non-finite values print as "nan", "inf" and "-inf".
std::string format_double(double value);

using Cell = std::variant<double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Writes `stem`.csv or `stem`.json and returns the file name written.
/// JSON tables are {"columns": [...], "rows": [[...], ...]} with null for
/// non-finite numbers.
std::string write_table(const std::filesystem::path& dir, const std::string& stem, const Table& table,
                        const std::string& format);

void write_text(const std::filesystem::path& file, const std::string& text);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Stacked line charts, one panel per series, as a standalone SVG document.
std::string svg_panels(const std::string& title, const std::string& x_label, const std::vector<Series>& series);

}  // namespace abtool
