#ifndef SKINMAP_COLORSPACE_HPP
#define SKINMAP_COLORSPACE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace skinmap {

/// 8-bit RGB pixel.
struct Rgb8 {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

enum class ColorSpace { rgb, hsv, ycbcr };

/// FULL3 keeps every channel. CHROMA2 keeps (r,g) for RGB, (H,V) for HSV
/// and (Cb,Cr) for YCbCr.
enum class ChannelMode { full3, chroma2 };

/// A (color space, channel mode) pair. Determines the feature dimension.
struct FeatureSpace {
    ColorSpace space = ColorSpace::rgb;
    ChannelMode mode = ChannelMode::full3;

    int dim() const noexcept { return mode == ChannelMode::full3 ? 3 : 2; }

    friend bool operator==(const FeatureSpace&, const FeatureSpace&) = default;
};

std::string_view to_string(ColorSpace space) noexcept;
std::string_view to_string(ChannelMode mode) noexcept;
std::string to_string(const FeatureSpace& fs);

/// Case-insensitive parse of "rgb", "hsv", "ycbcr".
std::optional<ColorSpace> parse_color_space(std::string_view text);
/// Case-insensitive parse of "full3", "chroma2".
std::optional<ChannelMode> parse_channel_mode(std::string_view text);

/// (R, G) / (R + G + B). A black pixel maps to (1/3, 1/3).
Eigen::Vector2d rgb_to_normalized_rg(Rgb8 p) noexcept;

/// Hexcone HSV with every channel in [0,1]. Hue is 0 for achromatic pixels.
Eigen::Vector3d rgb_to_hsv(Rgb8 p) noexcept;

/// BT.601 full-range YCbCr with 128 chroma offset, clamped to [0,255] and
/// divided by 255.
Eigen::Vector3d rgb_to_ycbcr(Rgb8 p) noexcept;

/// Feature vector of length fs.dim(); every component lies in [0,1].
/// RGB FULL3 is (R,G,B)/255.
Eigen::VectorXd extract_features(Rgb8 p, FeatureSpace fs);

/// Batch form: one row per pixel, fs.dim() columns.
Eigen::MatrixXd extract_features(std::span<const Rgb8> pixels, FeatureSpace fs);

}  // namespace skinmap

#endif  // SKINMAP_COLORSPACE_HPP
