#ifndef SKINMAP_IMAGE_HPP
#define SKINMAP_IMAGE_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "skinmap/colorspace.hpp"
#include "skinmap/errors.hpp"

namespace skinmap {

/// Row-major RGB image.
struct ImageBuffer {
    int width = 0;
    int height = 0;
    std::vector<Rgb8> pixels;

    ImageBuffer() = default;
    ImageBuffer(int w, int h) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h) {}
    ImageBuffer(int w, int h, std::vector<Rgb8> px) : width(w), height(h), pixels(std::move(px)) {
        if (pixels.size() != size()) throw ContractViolation("pixel count does not match image shape");
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(width) * height; }
    Rgb8& at(int x, int y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    const Rgb8& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Row-major ground-truth labels, nonzero = skin.
struct MaskBuffer {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> labels;

    MaskBuffer() = default;
    MaskBuffer(int w, int h) : width(w), height(h), labels(static_cast<std::size_t>(w) * h, 0) {}
    MaskBuffer(int w, int h, std::vector<std::uint8_t> l) : width(w), height(h), labels(std::move(l)) {
        if (labels.size() != size()) throw ContractViolation("label count does not match mask shape");
    }

    std::size_t size() const noexcept { return static_cast<std::size_t>(width) * height; }
    bool is_skin(std::size_t i) const { return labels[i] != 0; }
    std::size_t skin_count() const noexcept {
        std::size_t n = 0;
        for (auto v : labels) n += v != 0;
        return n;
    }
};

/// Row-major 8-bit single-channel image.
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> values;
};

}  // namespace skinmap

#endif  // SKINMAP_IMAGE_HPP
