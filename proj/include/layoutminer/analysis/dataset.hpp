#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"

namespace layoutminer {

// One widget at its materialized pose in one scenario. A widget reused in
// several scenarios yields one placement per scenario.
struct Placement {
  ScenarioKey scenario;
  WidgetId widget_id;
  Pose pose;
};

// Read-only analysis view over a store snapshot: every scenario log folded
// into its layout, plus the records the analyses join against.
class Dataset {
 public:
  explicit Dataset(DatasetSnapshot snapshot);

  const DatasetSnapshot& snapshot() const noexcept { return snapshot_; }
  // Layouts with at least one placement, keyed by scenario.
  const std::map<ScenarioKey, Layout>& layouts() const noexcept { return layouts_; }
  // Sorted by scenario, then widget id.
  const std::vector<Placement>& placements() const noexcept { return placements_; }
  // Placements whose scenario environment equals `environment` (all when empty).
  std::vector<const Placement*> placements_in(const std::optional<std::string>& environment) const;

  // Participants with at least one placement.
  std::set<ParticipantId> participants() const;
  std::set<std::string> environments() const;

  const Widget* widget(const WidgetId& id) const;
  const Screenshot* screenshot(const ScreenshotId& id) const;
  const Annotation* annotation(const WidgetId& id) const;

  bool empty() const noexcept { return placements_.empty(); }

 private:
  DatasetSnapshot snapshot_;
  std::map<ScenarioKey, Layout> layouts_;
  std::vector<Placement> placements_;
};

// Throws Error(UnannotatedWidget) naming every placement in `placements`
// without an annotation.
void require_annotated(const Dataset& dataset, const std::vector<const Placement*>& placements);

}  // namespace layoutminer
