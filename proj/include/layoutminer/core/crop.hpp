#pragma once

#include <string_view>

#include "layoutminer/core/types.hpp"

namespace layoutminer {

enum class CropClass { Whole, Cropped };

// Per-coordinate tolerance for treating a crop as the full screenshot.
inline constexpr double kWholeCropTolerance = 1e-6;

CropClass classify_crop(const CropRegion& crop) noexcept;
std::string_view to_string(CropClass cls) noexcept;

// Throws Error(InvalidCrop) unless 0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1.
void require_valid_crop(const CropRegion& crop);

}  // namespace layoutminer
