#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nccut/image.hpp"

namespace nccut {

using Bytes = std::vector<std::uint8_t>;

Bytes read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

/// Decodes an 8-bit PNG. Gray and palette images are promoted to RGB, alpha is
/// composited over black, 16-bit channels are reduced to 8 bits.
RgbImage load_image(std::span<const std::uint8_t> bytes);
RgbImage load_image(const std::filesystem::path& path);

/// Decodes any PNG as 8-bit gray (luma for color inputs).
Grid<std::uint8_t> load_gray8(std::span<const std::uint8_t> bytes);
Grid<std::uint16_t> load_gray16(std::span<const std::uint8_t> bytes);

Bytes encode_png(const RgbImage& image);
Bytes encode_png(const Grid<std::uint8_t>& gray);
Bytes encode_png(const Grid<std::uint16_t>& gray);

/// Object = 255, background = 0.
Bytes encode_mask_png(const Mask& mask);
/// Any nonzero gray value counts as object.
Mask decode_mask_png(std::span<const std::uint8_t> bytes);

} // namespace nccut
