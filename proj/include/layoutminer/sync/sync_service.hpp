#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"

namespace layoutminer {

enum class ClientRole { Placement, Preview };
std::string_view to_string(ClientRole role) noexcept;
std::optional<ClientRole> parse_client_role(std::string_view text) noexcept;

struct SessionContext {
  ScenarioKey scenario;
  ClientRole role = ClientRole::Placement;
  std::string client_id = "default";
};

struct NewScreenshot {
  std::optional<ScreenshotId> id;
  ParticipantId participant_id;
  std::string image;
  std::optional<std::string> app_hint;
  std::optional<TimestampMs> captured_at;
  bool redacted = false;
};

struct NewWidget {
  std::optional<WidgetId> id;
  ScreenshotId screenshot_id;
  CropRegion crop;
  std::string image;
  std::optional<TimestampMs> created_at;
};

// Collection-side protocol on top of an EventStore. Tracks the last widget
// placed by each (client, scenario) session so it can be adjusted.
class SyncService {
 public:
  explicit SyncService(EventStore& store) : store_(store) {}

  EventStore& store() noexcept { return store_; }

  PutOutcome create_scenario(const ScenarioKey& scenario);
  // Ids default to a digest of the content, so retried uploads are no-ops.
  ScreenshotId create_screenshot(const NewScreenshot& request);
  WidgetId create_widget(const NewWidget& request);

  // Appends Add; the widget becomes the session's last placed widget.
  // Error(WrongRole) for preview sessions.
  Seq handle_place(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                   std::optional<TimestampMs> at = std::nullopt);
  // Appends Update for the session's last placed widget; Error(NoLastWidget)
  // when the session has not placed anything yet.
  Seq handle_adjust_last(const SessionContext& ctx, const Pose& pose,
                         std::optional<TimestampMs> at = std::nullopt);
  // Appends Update for an explicitly re-selected widget.
  Seq handle_reselect_update(const SessionContext& ctx, const WidgetId& widget_id, const Pose& pose,
                             std::optional<TimestampMs> at = std::nullopt);

  ChangeBatch handle_changes(const ScenarioKey& scenario, Seq since_seq,
                             std::chrono::milliseconds wait_budget) const;
  void handle_pose_sample(const SessionContext& ctx, const Pose& pose, TimestampMs at);

  // Error(UnknownScenario) for unregistered scenarios.
  Layout layout(const ScenarioKey& scenario) const;

 private:
  using SessionKey = std::pair<std::string, ScenarioKey>;
  struct LastPlaced {
    WidgetId widget_id;
    Seq seq = 0;
  };

  void require_placement(const SessionContext& ctx) const;

  EventStore& store_;
  std::mutex sessions_mutex_;
  std::map<SessionKey, LastPlaced> last_placed_;
};

}  // namespace layoutminer
