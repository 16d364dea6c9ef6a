#ifndef SKINMAP_SVG_PLOT_HPP
#define SKINMAP_SVG_PLOT_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace skinmap {

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y) in [0,1]^2
};

/// Self-contained SVG line chart over the unit square: frame, grid, tick
/// labels, a dashed chance diagonal, one polyline per series and a legend.
std::string render_roc_svg(const std::string& title, std::span<const PlotSeries> series,
                           const std::string& x_label = "False positive rate",
                           const std::string& y_label = "True positive rate");

}  // namespace skinmap

#endif  // SKINMAP_SVG_PLOT_HPP
