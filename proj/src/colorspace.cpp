#include "skinmap/colorspace.hpp"

#include <algorithm>
#include <cctype>

namespace skinmap {

namespace {

std::string lowercase(std::string_view text) {
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double clamp_channel(double v) { return std::clamp(v, 0.0, 255.0); }

}  // namespace

std::string_view to_string(ColorSpace space) noexcept {
    switch (space) {
        case ColorSpace::rgb: return "RGB";
        case ColorSpace::hsv: return "HSV";
        case ColorSpace::ycbcr: return "YCBCR";
    }
    return "?";
}

std::string_view to_string(ChannelMode mode) noexcept {
    return mode == ChannelMode::full3 ? "FULL3" : "CHROMA2";
}

std::string to_string(const FeatureSpace& fs) {
    return std::string(to_string(fs.space)) + "/" + std::string(to_string(fs.mode));
}

std::optional<ColorSpace> parse_color_space(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "rgb") return ColorSpace::rgb;
    if (t == "hsv") return ColorSpace::hsv;
    if (t == "ycbcr") return ColorSpace::ycbcr;
    return std::nullopt;
}

std::optional<ChannelMode> parse_channel_mode(std::string_view text) {
    const auto t = lowercase(text);
    if (t == "full3") return ChannelMode::full3;
    if (t == "chroma2") return ChannelMode::chroma2;
    return std::nullopt;
}

Eigen::Vector2d rgb_to_normalized_rg(Rgb8 p) noexcept {
    const int sum = int{p.r} + int{p.g} + int{p.b};
    if (sum == 0) return {1.0 / 3.0, 1.0 / 3.0};
    return {static_cast<double>(p.r) / sum, static_cast<double>(p.g) / sum};
}

Eigen::Vector3d rgb_to_hsv(Rgb8 p) noexcept {
    const int hi = std::max({int{p.r}, int{p.g}, int{p.b}});
    const int lo = std::min({int{p.r}, int{p.g}, int{p.b}});
    const int chroma = hi - lo;

    const double value = hi / 255.0;
    if (chroma == 0) return {0.0, 0.0, value};

    const double saturation = static_cast<double>(chroma) / hi;
    double sextant;  // hue in units of 60 degrees, [0, 6)
    if (hi == p.r) {
        sextant = static_cast<double>(int{p.g} - int{p.b}) / chroma;
        if (sextant < 0.0) sextant += 6.0;
    } else if (hi == p.g) {
        sextant = static_cast<double>(int{p.b} - int{p.r}) / chroma + 2.0;
    } else {
        sextant = static_cast<double>(int{p.r} - int{p.g}) / chroma + 4.0;
    }
    return {sextant / 6.0, saturation, value};
}

Eigen::Vector3d rgb_to_ycbcr(Rgb8 p) noexcept {
    const double r = p.r, g = p.g, b = p.b;
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    const double cb = 128.0 - 0.168736 * r - 0.331264 * g + 0.5 * b;
    const double cr = 128.0 + 0.5 * r - 0.418688 * g - 0.081312 * b;
    return Eigen::Vector3d(clamp_channel(y), clamp_channel(cb), clamp_channel(cr)) / 255.0;
}

Eigen::VectorXd extract_features(Rgb8 p, FeatureSpace fs) {
    Eigen::VectorXd out(fs.dim());
    const bool full = fs.mode == ChannelMode::full3;
    switch (fs.space) {
        case ColorSpace::rgb:
            if (full)
                out << p.r / 255.0, p.g / 255.0, p.b / 255.0;
            else
                out = rgb_to_normalized_rg(p);
            break;
        case ColorSpace::hsv: {
            const Eigen::Vector3d hsv = rgb_to_hsv(p);
            if (full)
                out = hsv;
            else
                out << hsv(0), hsv(2);
            break;
        }
        case ColorSpace::ycbcr: {
            const Eigen::Vector3d ycc = rgb_to_ycbcr(p);
            if (full)
                out = ycc;
            else
                out = ycc.tail<2>();
            break;
        }
    }
    return out;
}

Eigen::MatrixXd extract_features(std::span<const Rgb8> pixels, FeatureSpace fs) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(pixels.size()), fs.dim());
    for (Eigen::Index i = 0; i < out.rows(); ++i)
        out.row(i) = extract_features(pixels[static_cast<std::size_t>(i)], fs).transpose();
    return out;
}

}  // namespace skinmap
