#include "layoutminer/client/placement.hpp"

#include <thread>

namespace layoutminer {

PlacementAborted::PlacementAborted(const Error& cause, std::size_t step, Transcript completed)
    : Error(cause.code(), "step " + std::to_string(step) + ": " + cause.detail()),
      step_(step),
      transcript_(std::move(completed)) {}

namespace {

TranscriptEntry execute(const SessionScript& script, std::size_t index, SyncEndpoint& endpoint,
                        const SessionContext& ctx, WidgetId& last_placed) {
  const auto& step = script.steps[index];
  TranscriptEntry entry;
  entry.step = index;
  entry.action = step.action;
  switch (step.action) {
    case StepAction::CreateWidget: {
      NewScreenshot shot;
      shot.id = step.screenshot_id;
      shot.participant_id = script.scenario.participant_id;
      shot.image = step.screenshot_image;
      shot.app_hint = step.app_hint;
      shot.captured_at = step.at_ms;
      NewWidget widget;
      widget.id = step.widget_id;
      widget.screenshot_id = endpoint.create_screenshot(shot);
      widget.crop = step.crop;
      widget.image = step.image;
      widget.created_at = step.at_ms;
      entry.widget_id = endpoint.create_widget(widget);
      break;
    }
    case StepAction::Place:
      entry.seq = endpoint.place(ctx, step.widget_id, step.pose, step.at_ms);
      entry.widget_id = step.widget_id;
      entry.pose = step.pose;
      last_placed = step.widget_id;
      break;
    case StepAction::AdjustLast:
      entry.seq = endpoint.adjust_last(ctx, step.pose, step.at_ms);
      entry.widget_id = last_placed;
      entry.pose = step.pose;
      break;
    case StepAction::Reselect:
      entry.seq = endpoint.reselect(ctx, step.widget_id, step.pose, step.at_ms);
      entry.widget_id = step.widget_id;
      entry.pose = step.pose;
      break;
    case StepAction::PoseSample:
      endpoint.pose_sample(ctx, step.pose, step.at_ms);
      entry.pose = step.pose;
      break;
  }
  return entry;
}

}  // namespace

Transcript run_placement(const SessionScript& script, SyncEndpoint& endpoint, const PlacementOptions& options) {
  const SessionContext ctx{script.scenario, ClientRole::Placement, script.client_id};
  Transcript transcript;
  WidgetId last_placed;
  if (!script.steps.empty()) endpoint.create_scenario(script.scenario);
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    if (options.pace && i > 0) {
      const auto gap = script.steps[i].at_ms - script.steps[i - 1].at_ms;
      if (gap > 0) std::this_thread::sleep_for(std::chrono::milliseconds(gap));
    }
    try {
      transcript.push_back(execute(script, i, endpoint, ctx, last_placed));
    } catch (const Error& e) {
      throw PlacementAborted(e, i, std::move(transcript));
    }
    if (options.on_step) options.on_step(transcript.back());
  }
  return transcript;
}

Json to_json(const Transcript& transcript) {
  Json out = Json::array();
  for (const auto& entry : transcript) {
    Json j{{"step", entry.step}, {"action", to_string(entry.action)}};
    j["widget_id"] = entry.widget_id.empty() ? Json(nullptr) : Json(entry.widget_id);
    j["seq"] = entry.seq ? Json(*entry.seq) : Json(nullptr);
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace layoutminer
