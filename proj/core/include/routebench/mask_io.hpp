#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "routebench/mask.hpp"

namespace routebench::mask {

/// Loads a class-id raster. Two containers are accepted and sniffed by
/// magic bytes: 8-bit single-channel PNG, or raw "NSRM" (magic, u32le
/// width, u32le height, row-major class bytes). Any pixel value > 7 is a
/// MaskFormatError.
SemanticMask load_mask(const std::string& path);

void save_mask_png(const SemanticMask& mask, const std::string& path);
void save_mask_nsrm(const SemanticMask& mask, const std::string& path);

/// Interleaved 8-bit RGB buffer, row-major.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels;  // 3 bytes per pixel

    void set(int row, int col, std::array<std::uint8_t, 3> rgb) {
        const std::size_t i = (static_cast<std::size_t>(row) * width + col) * 3;
        pixels[i] = rgb[0];
        pixels[i + 1] = rgb[1];
        pixels[i + 2] = rgb[2];
    }
};

void save_rgb_png(const RgbImage& image, const std::string& path);
RgbImage load_rgb_png(const std::string& path);

}  // namespace routebench::mask
