#pragma once
#include <string>
#include <vector>

namespace cosmon {

// Minimal static heat-map renderer: one panel per slice, viridis-like ramp,
// no timestamps or external references (byte-stable output).
struct HeatPanel {
    std::string label;
    std::size_t rows = 0, cols = 0;
    std::vector<double> values; // row-major
    double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;
    std::string x_label, y_label;
};

void write_heatmap_svg(const std::string& path, const std::vector<HeatPanel>& panels);

} // namespace cosmon
