#include "cosmon/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cosmon {

namespace {

void color_ramp(double v, int& r, int& g, int& b) {
    // compact viridis-like ramp on [0, 1]
    v = std::clamp(v, 0.0, 1.0);
    r = static_cast<int>(255.0 * std::clamp(1.13 * v - 0.15 * std::sin(6.0 * v), 0.0, 1.0));
    g = static_cast<int>(255.0 * std::clamp(std::pow(v, 0.7), 0.0, 1.0));
    b = static_cast<int>(255.0 * std::clamp(0.35 + 0.6 * std::sin(2.2 * v + 0.4), 0.0, 1.0));
}

} // namespace

void write_heatmap_svg(const std::string& path, const std::vector<HeatPanel>& panels) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);

    const int cell = 4, margin = 40, label_h = 18;
    int width = 0, height = margin;
    for (const auto& p : panels) {
        width = std::max(width, margin + static_cast<int>(p.cols) * cell + margin);
        height += label_h + static_cast<int>(p.rows) * cell + margin;
    }
    std::fprintf(f,
                 "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
                 "font-family=\"monospace\" font-size=\"11\">\n",
                 width, height);
    std::fprintf(f, "<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n", width, height);

    int y0 = margin;
    for (const auto& p : panels) {
        double vmax = 0.0;
        for (double v : p.values) vmax = std::max(vmax, v);
        if (vmax <= 0.0) vmax = 1.0;
        std::fprintf(f, "<text x=\"%d\" y=\"%d\">%s (max %.3e, x: %s in [%g, %g], y: %s in [%g, %g])</text>\n",
                     margin, y0 - 4, p.label.c_str(), vmax, p.x_label.c_str(), p.x_lo, p.x_hi,
                     p.y_label.c_str(), p.y_lo, p.y_hi);
        for (std::size_t i = 0; i < p.rows; ++i) {
            for (std::size_t j = 0; j < p.cols; ++j) {
                const double v = p.values[i * p.cols + j] / vmax;
                if (v <= 0.0) continue;
                int r, g, b;
                color_ramp(v, r, g, b);
                std::fprintf(f,
                             "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" "
                             "fill=\"rgb(%d,%d,%d)\"/>\n",
                             margin + static_cast<int>(j) * cell,
                             y0 + label_h + static_cast<int>(p.rows - 1 - i) * cell, cell, cell, r,
                             g, b);
            }
        }
        y0 += label_h + static_cast<int>(p.rows) * cell + margin;
    }
    std::fprintf(f, "</svg>\n");
    std::fclose(f);
}

} // namespace cosmon
