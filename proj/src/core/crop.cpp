#include "layoutminer/core/crop.hpp"

#include <cmath>

#include "layoutminer/core/error.hpp"

namespace layoutminer {

CropClass classify_crop(const CropRegion& crop) noexcept {
  const bool whole = std::abs(crop.x0) <= kWholeCropTolerance &&
                     std::abs(crop.y0) <= kWholeCropTolerance &&
                     std::abs(crop.x1 - 1.0) <= kWholeCropTolerance &&
                     std::abs(crop.y1 - 1.0) <= kWholeCropTolerance;
  return whole ? CropClass::Whole : CropClass::Cropped;
}

std::string_view to_string(CropClass cls) noexcept {
  return cls == CropClass::Whole ? "Whole" : "Cropped";
}

void require_valid_crop(const CropRegion& crop) {
  if (!crop.valid()) {
    throw Error(ErrorCode::InvalidCrop, "crop must satisfy 0 <= x0 < x1 <= 1 and 0 <= y0 < y1 <= 1");
  }
}

}  // namespace layoutminer
