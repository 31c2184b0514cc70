#include "layoutminer/analysis/dataset.hpp"

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"

namespace layoutminer {

Dataset::Dataset(DatasetSnapshot snapshot) : snapshot_(std::move(snapshot)) {
  for (const auto& [key, log] : snapshot_.events) {
    auto layout = fold_events(key, log);
    if (layout.placements.empty()) continue;
    for (const auto& [widget_id, pose] : layout.placements) {
      placements_.push_back(Placement{key, widget_id, pose});
    }
    layouts_.emplace(key, std::move(layout));
  }
}

std::vector<const Placement*> Dataset::placements_in(
    const std::optional<std::string>& environment) const {
  std::vector<const Placement*> out;
  for (const auto& p : placements_) {
    if (!environment || p.scenario.environment == *environment) out.push_back(&p);
  }
  return out;
}

std::set<ParticipantId> Dataset::participants() const {
  std::set<ParticipantId> out;
  for (const auto& [key, layout] : layouts_) out.insert(key.participant_id);
  return out;
}

std::set<std::string> Dataset::environments() const {
  std::set<std::string> out;
  for (const auto& [key, layout] : layouts_) out.insert(key.environment);
  return out;
}

const Widget* Dataset::widget(const WidgetId& id) const {
  const auto it = snapshot_.widgets.find(id);
  return it == snapshot_.widgets.end() ? nullptr : &it->second;
}

const Screenshot* Dataset::screenshot(const ScreenshotId& id) const {
  const auto it = snapshot_.screenshots.find(id);
  return it == snapshot_.screenshots.end() ? nullptr : &it->second;
}

const Annotation* Dataset::annotation(const WidgetId& id) const {
  const auto it = snapshot_.annotations.find(id);
  return it == snapshot_.annotations.end() ? nullptr : &it->second;
}

void require_annotated(const Dataset& dataset, const std::vector<const Placement*>& placements) {
  std::set<WidgetId> missing;
  for (const auto* p : placements) {
    if (!dataset.annotation(p->widget_id)) missing.insert(p->widget_id);
  }
  if (missing.empty()) return;
  std::string list;
  std::size_t shown = 0;
  for (const auto& id : missing) {
    if (shown == 20) {
      list += ", ... (" + std::to_string(missing.size() - shown) + " more)";
      break;
    }
    list += (shown++ ? ", " : "") + id;
  }
  throw Error(ErrorCode::UnannotatedWidget,
              std::to_string(missing.size()) + " placed widget(s) lack annotations: " + list);
}

}  // namespace layoutminer
