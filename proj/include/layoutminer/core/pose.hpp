#pragma once

#include <optional>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/types.hpp"

namespace layoutminer {

inline constexpr double kQuaternionNormTolerance = 1e-6;

// Empty when the pose is valid, otherwise the first violated invariant.
// Finiteness is checked before the norm, so a NaN quaternion reports
// NonFiniteComponent.
std::optional<ErrorCode> validate_pose(const Pose& pose) noexcept;

// Throws Error with the code from validate_pose.
void require_valid_pose(const Pose& pose);

double quaternion_norm(const Quaternion& q) noexcept;
double quaternion_dot(const Quaternion& a, const Quaternion& b) noexcept;
Quaternion quaternion_multiply(const Quaternion& a, const Quaternion& b) noexcept;
double distance(const Vec3& a, const Vec3& b) noexcept;

}  // namespace layoutminer
