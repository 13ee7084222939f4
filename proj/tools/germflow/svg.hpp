#pragma once

#include <string>
#include <vector>

namespace germflow::cli {

/// One polyline on a log-log ratio plot.
struct LogLogSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (s, value), values > 0 plotted
};

/// Static log-log plot (ratio vs s); returns the SVG document.
std::string render_loglog_svg(const std::string& title, const std::vector<LogLogSeries>& series);

struct ScatterGroup {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

/// Static scatter plot for before/after fibre clouds.
std::string render_scatter_svg(const std::string& title, const std::vector<ScatterGroup>& groups);

}  // namespace germflow::cli
