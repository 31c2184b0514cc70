#include "layoutminer/core/pose.hpp"

#include <cmath>

namespace layoutminer {

std::optional<ErrorCode> validate_pose(const Pose& pose) noexcept {
  const auto& p = pose.position;
  const auto& q = pose.orientation;
  for (double v : {p.x, p.y, p.z, q.w, q.x, q.y, q.z}) {
    if (!std::isfinite(v)) return ErrorCode::NonFiniteComponent;
  }
  if (std::abs(quaternion_norm(q) - 1.0) > kQuaternionNormTolerance) {
    return ErrorCode::NonUnitQuaternion;
  }
  return std::nullopt;
}

void require_valid_pose(const Pose& pose) {
  if (auto code = validate_pose(pose)) {
    throw Error(*code, "invalid pose");
  }
}

double quaternion_norm(const Quaternion& q) noexcept {
  return std::sqrt(q.w * q.w + q.x * q.x + q.y * q.y + q.z * q.z);
}

double quaternion_dot(const Quaternion& a, const Quaternion& b) noexcept {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

Quaternion quaternion_multiply(const Quaternion& a, const Quaternion& b) noexcept {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

double distance(const Vec3& a, const Vec3& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

}  // namespace layoutminer
