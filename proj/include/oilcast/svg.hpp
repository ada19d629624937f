#pragma once

#include <string>
#include <vector>

namespace oilcast {

struct ChartSeries {
    std::string label;
    std::vector<double> values; // plotted against their index
};

struct ChartPanel {
    std::string title;
    std::string y_label;
    std::vector<ChartSeries> series;
};

// Standalone SVG document with one line-chart panel per entry, stacked
// vertically: axes, ticks, legend, no external references.
std::string render_chart_svg(const std::vector<ChartPanel>& panels, int width = 860,
                             int panel_height = 300);

} // namespace oilcast
