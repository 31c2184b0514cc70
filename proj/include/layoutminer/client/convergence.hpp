#pragma once

#include <vector>

#include "layoutminer/client/placement.hpp"
#include "layoutminer/core/json_io.hpp"

namespace layoutminer {

inline constexpr double kPositionTolerance = 1e-6;
inline constexpr double kOrientationDotTolerance = 1e-9;

struct ConvergenceReport {
  bool equal = true;
  double max_position_delta = 0.0;
  // Smallest |q1 . q2| over shared widgets; 1 when none are shared.
  double min_orientation_dot = 1.0;
  std::vector<WidgetId> missing;
  std::vector<WidgetId> extra;
};

// The layout the transcript's acknowledged events imply.
std::map<WidgetId, Pose> transcript_placements(const Transcript& transcript);

ConvergenceReport compare_placements(const std::map<WidgetId, Pose>& expected,
                                     const std::map<WidgetId, Pose>& actual);
ConvergenceReport check_convergence(const Transcript& transcript, const Layout& preview);

Json to_json(const ConvergenceReport& report);

}  // namespace layoutminer
