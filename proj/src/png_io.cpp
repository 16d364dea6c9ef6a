#include "skinmap/png_io.hpp"

#include <cstring>
#include <string>

#include <png.h>

namespace skinmap {

namespace {

struct DecodedPng {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bytes;
};

DecodedPng decode(const std::filesystem::path& path, png_uint_32 format) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw MissingFileError(path.string());

    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_file(&image, path.string().c_str()))
        throw DecodeError("cannot decode PNG " + path.string() + ": " + image.message);

    image.format = format;
    DecodedPng out;
    out.width = static_cast<int>(image.width);
    out.height = static_cast<int>(image.height);
    out.bytes.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, out.bytes.data(), 0, nullptr)) {
        const std::string message = image.message;
        png_image_free(&image);
        throw DecodeError("cannot decode PNG " + path.string() + ": " + message);
    }
    return out;
}

void encode(const std::filesystem::path& path, int width, int height, png_uint_32 format, const void* data) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = format;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, data, 0, nullptr))
        throw IoError("cannot write PNG " + path.string() + ": " + image.message);
}

}  // namespace

ImageBuffer read_png_rgb(const std::filesystem::path& path) {
    const auto png = decode(path, PNG_FORMAT_RGB);
    ImageBuffer out(png.width, png.height);
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = {png.bytes[3 * i], png.bytes[3 * i + 1], png.bytes[3 * i + 2]};
    return out;
}

MaskBuffer read_png_mask(const std::filesystem::path& path) {
    const auto png = decode(path, PNG_FORMAT_RGB);
    MaskBuffer out(png.width, png.height);
    for (std::size_t i = 0; i < out.labels.size(); ++i)
        out.labels[i] = (png.bytes[3 * i] | png.bytes[3 * i + 1] | png.bytes[3 * i + 2]) != 0;
    return out;
}

void write_png_rgb(const std::filesystem::path& path, const ImageBuffer& image) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(image.pixels.size() * 3);
    for (const auto& p : image.pixels) {
        bytes.push_back(p.r);
        bytes.push_back(p.g);
        bytes.push_back(p.b);
    }
    encode(path, image.width, image.height, PNG_FORMAT_RGB, bytes.data());
}

void write_png_gray(const std::filesystem::path& path, const GrayImage& image) {
    encode(path, image.width, image.height, PNG_FORMAT_GRAY, image.values.data());
}

void write_png_mask(const std::filesystem::path& path, const MaskBuffer& mask) {
    GrayImage gray{mask.width, mask.height, {}};
    gray.values.reserve(mask.labels.size());
    for (auto v : mask.labels) gray.values.push_back(v ? 255 : 0);
    write_png_gray(path, gray);
}

}  // namespace skinmap
