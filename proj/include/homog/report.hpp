#pragma once

#include <string>
#include <vector>

#include "homog/types.hpp"

namespace homog {

/// Shortest-ish deterministic decimal rendering of a double ('.' decimal
/// separator, round-trippable).
std::string format_number(double v);

/// Write a numeric CSV table: header row, '.' decimal, LF endings, UTF-8.
/// Throws ValidationError when a row width disagrees with the header or the
/// file cannot be opened, and when any value is non-finite.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Hand-rolled log-log SVG decay plot: decade grid lines, one polyline with
/// point markers per series, legend in the top-right corner. All inputs must
/// be strictly positive.
void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::string& x_label, const std::string& y_label,
                      const std::vector<PlotSeries>& series);

} // namespace homog
