#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "jenga/raster.hpp"

namespace jenga {

std::vector<std::uint8_t> encode_png(const RasterImage& image);
std::vector<std::uint8_t> encode_png(const BinaryMask& mask);

/// Decodes any valid PNG to 8-bit RGB.
RasterImage decode_png_image(const std::vector<std::uint8_t>& bytes);

/// Decodes a PNG to a mask; any non-black pixel counts as true.
BinaryMask decode_png_mask(const std::vector<std::uint8_t>& bytes);

void write_file(const std::filesystem::path& path,
                const std::vector<std::uint8_t>& bytes);
void write_file(const std::filesystem::path& path, const std::string& text);
std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

inline void write_png(const std::filesystem::path& path, const RasterImage& img) {
    write_file(path, encode_png(img));
}
inline void write_png(const std::filesystem::path& path, const BinaryMask& mask) {
    write_file(path, encode_png(mask));
}
inline RasterImage read_png_image(const std::filesystem::path& path) {
    return decode_png_image(read_file(path));
}
inline BinaryMask read_png_mask(const std::filesystem::path& path) {
    return decode_png_mask(read_file(path));
}

}  // namespace jenga
