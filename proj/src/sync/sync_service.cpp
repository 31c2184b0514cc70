#include "layoutminer/sync/sync_service.hpp"

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace {

TimestampMs wall_clock_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

}  // namespace

std::string_view to_string(ClientRole role) noexcept {
  return role == ClientRole::Placement ? "placement" : "preview";
}

std::optional<ClientRole> parse_client_role(std::string_view text) noexcept {
  if (text == "placement") return ClientRole::Placement;
  if (text == "preview") return ClientRole::Preview;
  return std::nullopt;
}

PutOutcome SyncService::create_scenario(const ScenarioKey& scenario) {
  return store_.put_scenario(scenario);
}

ScreenshotId SyncService::create_screenshot(const NewScreenshot& request) {
  if (request.participant_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, "participant_id must not be empty");
  }
  const auto image = store_.put_blob(request.image);
  Screenshot shot;
  shot.id = request.id.value_or("s_" + image.substr(0, 16));
  shot.participant_id = request.participant_id;
  shot.image_ref = image;
  shot.app_hint = request.app_hint;
  shot.captured_at = request.captured_at.value_or(wall_clock_ms());
  shot.redacted = request.redacted;
  if (!request.id) {
    // A retried upload without an id reuses the stored record.
    if (auto existing = store_.screenshot(shot.id)) return existing->id;
  }
  store_.put_screenshot(shot);
  return shot.id;
}

WidgetId SyncService::create_widget(const NewWidget& request) {
  const auto image = store_.put_blob(request.image);
  Widget widget;
  widget.screenshot_id = request.screenshot_id;
  widget.crop = request.crop;
  widget.image_ref = image;
  widget.created_at = request.created_at.value_or(wall_clock_ms());
  if (request.id) {
    widget.id = *request.id;
  } else {
    const auto digest =
        sha256_hex(request.screenshot_id + "\n" + to_json(request.crop).dump() + "\n" + image);
    widget.id = "w_" + digest.substr(0, 16);
    if (auto existing = store_.widget(widget.id)) return existing->id;
  }
  store_.put_widget(widget);
  return widget.id;
}

void SyncService::require_placement(const SessionContext& ctx) const {
  if (ctx.role != ClientRole::Placement) {
    throw Error(ErrorCode::WrongRole, "preview sessions cannot modify layouts");
  }
}

Seq SyncService::handle_place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                              std::optional<TimestampMs> at) {
  require_placement(ctx);
  const auto seq = store_.append_event(ctx.scenario, widget_id, EventKind::Add, pose, at);
  std::lock_guard lock(sessions_mutex_);
  auto& last = last_placed_[{ctx.client_id, ctx.scenario}];
  if (seq > last.seq) last = LastPlaced{widget_id, seq};
  return seq;
}

Seq SyncService::handle_adjust_last(const SessionContext& ctx, const Pose& pose,
                                    std::optional<TimestampMs> at) {
  require_placement(ctx);
  WidgetId target;
  {
    std::lock_guard lock(sessions_mutex_);
    const auto it = last_placed_.find({ctx.client_id, ctx.scenario});
    if (it == last_placed_.end()) {
      throw Error(ErrorCode::NoLastWidget, "session " + ctx.client_id +
                                               " has not placed a widget in " + ctx.scenario.to_string());
    }
    target = it->second.widget_id;
  }
  return store_.append_event(ctx.scenario, target, EventKind::Update, pose, at);
}

Seq SyncService::handle_reselect_update(const SessionContext& ctx, const WidgetId& widget_id,
                                        const Pose& pose, std::optional<TimestampMs> at) {
  require_placement(ctx);
  return store_.append_event(ctx.scenario, widget_id, EventKind::Update, pose, at);
}

ChangeBatch SyncService::handle_changes(const ScenarioKey& scenario, Seq since_seq,
                                        std::chrono::milliseconds wait_budget) const {
  if (wait_budget.count() <= 0) return store_.get_changes(scenario, since_seq);
  return store_.wait_for_changes(scenario, since_seq, wait_budget);
}

void SyncService::handle_pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at) {
  store_.append_pose_sample(PoseSample{ctx.scenario, pose, at});
}

Layout SyncService::layout(const ScenarioKey& scenario) const {
  return fold_events(scenario, store_.events(scenario));
}

}  // namespace layoutminer
