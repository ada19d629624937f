#include "oilcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "oilcast/errors.hpp"

namespace oilcast {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace

std::string render_chart_svg(const std::vector<ChartPanel>& panels, int width,
                             int panel_height) {
    if (panels.empty())
        throw Error(ErrorKind::input, "no chart panels");
    const int total_height = panel_height * static_cast<int>(panels.size());
    const double margin_left = 64, margin_right = 16, margin_top = 34, margin_bottom = 30;

    std::string svg = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(total_height) + "\" viewBox=\"0 0 " +
           std::to_string(width) + " " + std::to_string(total_height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const ChartPanel& panel = panels[p];
        const double top = static_cast<double>(panel_height) * static_cast<double>(p);
        const double plot_x = margin_left;
        const double plot_y = top + margin_top;
        const double plot_w = width - margin_left - margin_right;
        const double plot_h = panel_height - margin_top - margin_bottom;

        std::size_t n = 0;
        double lo = 0.0, hi = 1.0;
        bool first = true;
        for (const ChartSeries& s : panel.series) {
            n = std::max(n, s.values.size());
            for (double v : s.values) {
                if (first) {
                    lo = hi = v;
                    first = false;
                } else {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
            }
        }
        if (n < 2)
            throw Error(ErrorKind::input, "panel '" + panel.title + "' has fewer than 2 points");
        if (!(hi > lo)) { // flat data still gets a visible band
            hi += 0.5;
            lo -= 0.5;
        }

        auto x_of = [&](std::size_t i) {
            return plot_x + plot_w * static_cast<double>(i) / static_cast<double>(n - 1);
        };
        auto y_of = [&](double v) { return plot_y + plot_h * (1.0 - (v - lo) / (hi - lo)); };

        svg += "<g>\n";
        svg += "<text x=\"" + num(plot_x) + "\" y=\"" + num(top + 20) +
               "\" font-family=\"sans-serif\" font-size=\"14\" font-weight=\"bold\">" +
               escape(panel.title) + "</text>\n";
        // frame
        svg += "<rect x=\"" + num(plot_x) + "\" y=\"" + num(plot_y) + "\" width=\"" +
               num(plot_w) + "\" height=\"" + num(plot_h) +
               "\" fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n";
        // y ticks
        for (int tick = 0; tick <= 4; ++tick) {
            double v = lo + (hi - lo) * tick / 4.0;
            double y = y_of(v);
            svg += "<line x1=\"" + num(plot_x - 4) + "\" y1=\"" + num(y) + "\" x2=\"" +
                   num(plot_x) + "\" y2=\"" + num(y) + "\" stroke=\"#333\"/>\n";
            svg += "<text x=\"" + num(plot_x - 8) + "\" y=\"" + num(y + 4) +
                   "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" +
                   num(v) + "</text>\n";
            if (tick > 0)
                svg += "<line x1=\"" + num(plot_x) + "\" y1=\"" + num(y) + "\" x2=\"" +
                       num(plot_x + plot_w) + "\" y2=\"" + num(y) +
                       "\" stroke=\"#ddd\" stroke-width=\"0.5\"/>\n";
        }
        // x ticks (week index)
        for (int tick = 0; tick <= 4; ++tick) {
            std::size_t i = (n - 1) * static_cast<std::size_t>(tick) / 4;
            double x = x_of(i);
            svg += "<line x1=\"" + num(x) + "\" y1=\"" + num(plot_y + plot_h) + "\" x2=\"" +
                   num(x) + "\" y2=\"" + num(plot_y + plot_h + 4) + "\" stroke=\"#333\"/>\n";
            svg += "<text x=\"" + num(x) + "\" y=\"" + num(plot_y + plot_h + 16) +
                   "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
                   std::to_string(i) + "</text>\n";
        }
        svg += "<text x=\"" + num(plot_x + plot_w / 2) + "\" y=\"" +
               num(plot_y + plot_h + 28) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">week</text>\n";
        svg += "<text x=\"" + num(14.0) + "\" y=\"" + num(plot_y + plot_h / 2) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\" " +
               "transform=\"rotate(-90 14 " + num(plot_y + plot_h / 2) + ")\">" +
               escape(panel.y_label) + "</text>\n";

        for (std::size_t s = 0; s < panel.series.size(); ++s) {
            const ChartSeries& series = panel.series[s];
            const char* color = kPalette[s % 4];
            std::string points;
            for (std::size_t i = 0; i < series.values.size(); ++i) {
                if (i)
                    points += ' ';
                points += num(x_of(i)) + "," + num(y_of(series.values[i]));
            }
            svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
                   "\" stroke-width=\"1.5\" points=\"" + points + "\"/>\n";
            // legend entry
            double lx = plot_x + plot_w - 150;
            double ly = plot_y + 14 + 16 * static_cast<double>(s);
            svg += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" +
                   num(lx + 22) + "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + color +
                   "\" stroke-width=\"2\"/>\n";
            svg += "<text x=\"" + num(lx + 28) + "\" y=\"" + num(ly) +
                   "\" font-family=\"sans-serif\" font-size=\"11\">" + escape(series.label) +
                   "</text>\n";
        }
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace oilcast
