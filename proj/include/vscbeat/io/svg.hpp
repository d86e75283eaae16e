#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace vscbeat::io {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Polyline chart with axes, tick labels and a legend.
std::string render_svg(const Plot& plot);
void write_svg(const std::filesystem::path& path, const Plot& plot);

} // namespace vscbeat::io
