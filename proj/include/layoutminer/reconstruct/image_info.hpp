#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

namespace layoutminer {

struct ImageSize {
  std::uint32_t width = 0;
  std::uint32_t height = 0;
};

// Pixel dimensions from a PNG, JPEG or GIF header; nullopt for anything else.
std::optional<ImageSize> sniff_image_size(std::string_view bytes) noexcept;

}  // namespace layoutminer
