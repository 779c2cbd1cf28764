#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace filmcascade {

class ReportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric table with named columns. Output is byte-stable: numbers are
/// printed with 17 significant digits, so CSV round-trips exactly.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  void add(std::vector<double> row);
};

std::string to_csv(const Table& t);
Table parse_csv(const std::string& text);
/// {"columns": [...], "rows": [[...]], "summary": {...}}; keys sorted.
std::string to_json(const Table& t, const std::map<std::string, double>& summary = {});

struct PlotSeries {
  std::string label;
  std::vector<double> x, y;
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<PlotSeries> series;
  bool logx = false, logy = false;
};

/// Line plot with axes, ticks and a legend.
std::string to_svg(const Plot& p);

enum class ReportFormat { Csv, Json, Svg };

/// Writes the table (or, for Svg, column 0 against every other column).
/// Empty tables raise ReportError; unwritable paths raise ReportError.
void emit_report(const Table& t, ReportFormat f, const std::string& path,
                 const std::map<std::string, double>& summary = {}, bool loglog = false);
void write_text(const std::string& path, const std::string& content);

}  // namespace filmcascade
