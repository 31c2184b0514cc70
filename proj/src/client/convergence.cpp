#include "layoutminer/client/convergence.hpp"

#include <algorithm>
#include <cmath>

#include "layoutminer/core/pose.hpp"

namespace layoutminer {

std::map<WidgetId, Pose> transcript_placements(const Transcript& transcript) {
  std::map<WidgetId, std::pair<Seq, Pose>> latest;
  for (const auto& entry : transcript) {
    if (!entry.seq || !entry.pose) continue;
    auto it = latest.find(entry.widget_id);
    if (it == latest.end() || it->second.first < *entry.seq) latest[entry.widget_id] = {*entry.seq, *entry.pose};
  }
  std::map<WidgetId, Pose> out;
  for (const auto& [id, value] : latest) out.emplace(id, value.second);
  return out;
}

ConvergenceReport compare_placements(const std::map<WidgetId, Pose>& expected,
                                     const std::map<WidgetId, Pose>& actual) {
  ConvergenceReport report;
  for (const auto& [id, pose] : expected) {
    const auto it = actual.find(id);
    if (it == actual.end()) {
      report.missing.push_back(id);
      continue;
    }
    report.max_position_delta = std::max(report.max_position_delta, distance(pose.position, it->second.position));
    report.min_orientation_dot =
        std::min(report.min_orientation_dot, std::abs(quaternion_dot(pose.orientation, it->second.orientation)));
  }
  for (const auto& [id, pose] : actual) {
    if (!expected.contains(id)) report.extra.push_back(id);
  }
  report.equal = report.missing.empty() && report.extra.empty() &&
                 report.max_position_delta <= kPositionTolerance &&
                 report.min_orientation_dot >= 1.0 - kOrientationDotTolerance;
  return report;
}

ConvergenceReport check_convergence(const Transcript& transcript, const Layout& preview) {
  return compare_placements(transcript_placements(transcript), preview.placements);
}

Json to_json(const ConvergenceReport& report) {
  return Json{{"equal", report.equal},
              {"max_position_delta", report.max_position_delta},
              {"min_orientation_dot", report.min_orientation_dot},
              {"missing", report.missing},
              {"extra", report.extra}};
}

}  // namespace layoutminer
