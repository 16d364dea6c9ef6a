#include "skinmap/svg_plot.hpp"

#include <array>
#include <cstdio>
#include <string_view>

namespace skinmap {

namespace {

constexpr double kWidth = 640;
constexpr double kHeight = 520;
constexpr double kLeft = 70;
constexpr double kTop = 40;
constexpr double kPlot = 400;

constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
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

double px(double x) { return kLeft + x * kPlot; }
double py(double y) { return kTop + (1.0 - y) * kPlot; }

}  // namespace

std::string render_roc_svg(const std::string& title, std::span<const PlotSeries> series, const std::string& x_label,
                           const std::string& y_label) {
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) +
           "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(kHeight) + "\" font-family=\"sans-serif\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt(kWidth) + "\" height=\"" + fmt(kHeight) + "\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kLeft + kPlot / 2) + "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" +
           escape(title) + "</text>\n";

    // grid and ticks every 0.1
    svg += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (int i = 1; i < 10; ++i) {
        const double t = i / 10.0;
        svg += "<line x1=\"" + fmt(px(t)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(t)) + "\" y2=\"" +
               fmt(py(1)) + "\"/>\n";
        svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(t)) + "\" x2=\"" + fmt(px(1)) + "\" y2=\"" +
               fmt(py(t)) + "\"/>\n";
    }
    svg += "</g>\n<g font-size=\"11\" fill=\"#333333\">\n";
    for (int i = 0; i <= 10; i += 2) {
        const double t = i / 10.0;
        svg += "<text x=\"" + fmt(px(t)) + "\" y=\"" + fmt(py(0) + 16) + "\" text-anchor=\"middle\">" + fmt(t).substr(0, 3) +
               "</text>\n";
        svg += "<text x=\"" + fmt(px(0) - 8) + "\" y=\"" + fmt(py(t) + 4) + "\" text-anchor=\"end\">" + fmt(t).substr(0, 3) +
               "</text>\n";
    }
    svg += "</g>\n";
    svg += "<rect x=\"" + fmt(px(0)) + "\" y=\"" + fmt(py(1)) + "\" width=\"" + fmt(kPlot) + "\" height=\"" +
           fmt(kPlot) + "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
    svg += "<line x1=\"" + fmt(px(0)) + "\" y1=\"" + fmt(py(0)) + "\" x2=\"" + fmt(px(1)) + "\" y2=\"" + fmt(py(1)) +
           "\" stroke=\"#999999\" stroke-dasharray=\"4 4\"/>\n";
    svg += "<text x=\"" + fmt(px(0.5)) + "\" y=\"" + fmt(py(0) + 40) + "\" font-size=\"13\" text-anchor=\"middle\">" +
           escape(x_label) + "</text>\n";
    svg += "<text x=\"20\" y=\"" + fmt(py(0.5)) + "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 20 " +
           fmt(py(0.5)) + ")\">" + escape(y_label) + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto color = kPalette[s % kPalette.size()];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"2\" points=\"";
        bool first = true;
        for (const auto& [x, y] : series[s].points) {
            if (!first) svg += ' ';
            svg += fmt(px(x)) + "," + fmt(py(y));
            first = false;
        }
        svg += "\"/>\n";
    }

    // legend, lower right inside the frame
    const double legend_top = py(0) - 12 - 18.0 * static_cast<double>(series.size());
    for (std::size_t s = 0; s < series.size(); ++s) {
        const double y = legend_top + 18.0 * static_cast<double>(s);
        const auto color = kPalette[s % kPalette.size()];
        svg += "<line x1=\"" + fmt(px(0.55)) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(px(0.55) + 24) + "\" y2=\"" +
               fmt(y) + "\" stroke=\"" + std::string(color) + "\" stroke-width=\"3\"/>\n";
        svg += "<text x=\"" + fmt(px(0.55) + 30) + "\" y=\"" + fmt(y + 4) + "\" font-size=\"12\">" +
               escape(series[s].label) + "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace skinmap
