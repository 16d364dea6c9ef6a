#ifndef SKINMAP_PNG_IO_HPP
#define SKINMAP_PNG_IO_HPP

#include <filesystem>

#include "skinmap/image.hpp"

namespace skinmap {

/// Decodes any PNG into 8-bit RGB. Throws MissingFileError or DecodeError.
ImageBuffer read_png_rgb(const std::filesystem::path& path);

/// Decodes a gray or color PNG mask; a pixel is skin iff any channel is nonzero.
MaskBuffer read_png_mask(const std::filesystem::path& path);

/// Throws IoError on failure.
void write_png_rgb(const std::filesystem::path& path, const ImageBuffer& image);
void write_png_gray(const std::filesystem::path& path, const GrayImage& image);

/// Writes the mask as gray PNG with 255 for skin and 0 elsewhere.
void write_png_mask(const std::filesystem::path& path, const MaskBuffer& mask);

}  // namespace skinmap

#endif  // SKINMAP_PNG_IO_HPP
