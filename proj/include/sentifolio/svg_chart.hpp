#pragma once

#include <string>
#include <vector>

#include "sentifolio/dates.hpp"

namespace sentifolio {

struct ChartSeries {
    std::string label;
    std::string color;  // SVG color
    std::vector<double> values;
};

/// Renders a multi-series line chart (shared x calendar, y auto-scaled with
/// gridlines and a legend) as a standalone SVG document. Output is plain
/// deterministic text so reruns diff cleanly.
std::string render_line_chart(const std::string& title, const std::vector<Date>& dates,
                              const std::vector<ChartSeries>& series);

void write_line_chart(const std::string& path, const std::string& title,
                      const std::vector<Date>& dates,
                      const std::vector<ChartSeries>& series);

}  // namespace sentifolio
