#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acd {

/// Minimal PNG codec over zlib, enough for sample grids and plots:
/// 8-bit grayscale or RGB, filter type 0. The reader only accepts files
/// this writer produces.
void write_png_gray8(const std::string& path, const std::vector<uint8_t>& px,
                     int width, int height);
void write_png_rgb8(const std::string& path, const std::vector<uint8_t>& rgb,
                    int width, int height);

struct PngImage {
    int width = 0;
    int height = 0;
    int channels = 0;  // 1 or 3
    std::vector<uint8_t> px;
};

PngImage read_png(const std::string& path);

}  // namespace acd
