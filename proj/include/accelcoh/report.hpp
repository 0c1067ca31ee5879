#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace accelcoh::report {

/// A numeric table plus its comment header. Comment lines are stored without
/// the leading "# ".
struct Table {
  std::vector<std::string> comments;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws ConfigError
};

/// Shortest decimal string that parses back to the same double ("nan" for NaN).
std::string format_double(double v);

/// "# comment" lines, then the column header, then one line per row.
void write_csv(std::ostream& out, const Table& table);

/// Inverse of write_csv. Comments anywhere in the body are collected in order.
Table read_csv(std::istream& in);

std::string to_json(const Table& table);

enum class PlotKind { lines, heatmap, scatter };

struct PlotSpec {
  PlotKind kind = PlotKind::lines;
  std::string title;
  std::size_t x = 0;                // column index
  std::vector<std::size_t> y = {1};  // lines: one series per column; others: y[0]
  std::size_t z = 2;                 // heatmap / scatter colour column
  bool log_y = false;
};

/// Standalone SVG document with axes, tick labels, a legend and the table's
/// comments embedded as an XML comment. Throws ConfigError on an empty table.
std::string render_svg(const Table& table, const PlotSpec& plot);

}  // namespace accelcoh::report
