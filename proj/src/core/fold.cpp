#include "layoutminer/core/fold.hpp"

#include "layoutminer/core/error.hpp"

namespace layoutminer {

bool apply_event(Layout& layout, const InteractionEvent& event) {
  if (layout.as_of_seq == 0 && layout.placements.empty() && !layout.scenario.valid()) {
    layout.scenario = event.scenario;
  } else if (event.scenario != layout.scenario) {
    throw Error(ErrorCode::ScenarioMismatch,
                "event for " + event.scenario.to_string() + " applied to layout of " +
                    layout.scenario.to_string());
  }
  if (event.seq <= layout.as_of_seq) return false;
  if (event.seq != layout.as_of_seq + 1) {
    throw Error(ErrorCode::NonMonotonicSeq, "expected seq " + std::to_string(layout.as_of_seq + 1) +
                                                ", got " + std::to_string(event.seq));
  }
  if (event.kind == EventKind::Update && !layout.placements.contains(event.widget_id)) {
    throw Error(ErrorCode::UpdateBeforeAdd,
                "update of widget " + event.widget_id + " at seq " + std::to_string(event.seq));
  }
  layout.placements[event.widget_id] = event.pose;
  layout.as_of_seq = event.seq;
  return true;
}

std::size_t apply_events(Layout& layout, std::span<const InteractionEvent> events) {
  std::size_t applied = 0;
  for (const auto& event : events) {
    if (apply_event(layout, event)) ++applied;
  }
  return applied;
}

Layout fold_events(const ScenarioKey& scenario, std::span<const InteractionEvent> events) {
  Layout layout;
  layout.scenario = scenario;
  for (const auto& event : events) {
    // A complete log never repeats a seq, unlike a re-delivered batch.
    if (event.seq != layout.as_of_seq + 1) {
      throw Error(ErrorCode::NonMonotonicSeq,
                  "expected seq " + std::to_string(layout.as_of_seq + 1) + ", got " +
                      std::to_string(event.seq));
    }
    apply_event(layout, event);
  }
  return layout;
}

Layout fold_events(std::span<const InteractionEvent> events) {
  if (events.empty()) return Layout{};
  return fold_events(events.front().scenario, events);
}

}  // namespace layoutminer
