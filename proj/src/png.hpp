#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace anisolay::detail {

/// 8-bit RGBA, non-interlaced, filter 0 on every row.
std::string encode_png_rgba(int width, int height, std::span<const std::uint8_t> rgba);

std::string base64_encode(std::string_view bytes);

}  // namespace anisolay::detail
