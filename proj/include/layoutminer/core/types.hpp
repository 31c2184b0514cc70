#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace layoutminer {

using TimestampMs = std::int64_t;
using Seq = std::uint64_t;
using WidgetId = std::string;
using ScreenshotId = std::string;
using ParticipantId = std::string;
using BlobHash = std::string;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// Stored (w, x, y, z).
struct Quaternion {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Quaternion&, const Quaternion&) = default;
};

// World-frame pose, meters, right-handed.
struct Pose {
  Vec3 position;
  Quaternion orientation;

  friend bool operator==(const Pose&, const Pose&) = default;
};

struct ScenarioKey {
  ParticipantId participant_id;
  std::string environment;
  std::string task;

  bool valid() const noexcept {
    return !participant_id.empty() && !environment.empty() && !task.empty();
  }
  // "participant/environment/task"
  std::string to_string() const;
  static std::optional<ScenarioKey> parse(std::string_view text);

  friend auto operator<=>(const ScenarioKey&, const ScenarioKey&) = default;
  friend bool operator==(const ScenarioKey&, const ScenarioKey&) = default;
};

struct Screenshot {
  ScreenshotId id;
  ParticipantId participant_id;
  BlobHash image_ref;
  std::optional<std::string> app_hint;
  TimestampMs captured_at = 0;
  bool redacted = false;

  friend bool operator==(const Screenshot&, const Screenshot&) = default;
};

// Normalized screenshot coordinates, origin top-left.
struct CropRegion {
  double x0 = 0.0;
  double y0 = 0.0;
  double x1 = 1.0;
  double y1 = 1.0;

  bool valid() const noexcept;
  double width() const noexcept { return x1 - x0; }
  double height() const noexcept { return y1 - y0; }

  friend bool operator==(const CropRegion&, const CropRegion&) = default;
};

struct Widget {
  WidgetId id;
  ScreenshotId screenshot_id;
  CropRegion crop;
  BlobHash image_ref;
  TimestampMs created_at = 0;

  friend bool operator==(const Widget&, const Widget&) = default;
};

enum class EventKind { Add, Update };

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

struct InteractionEvent {
  Seq seq = 0;
  ScenarioKey scenario;
  WidgetId widget_id;
  EventKind kind = EventKind::Add;
  Pose pose;
  TimestampMs at = 0;

  friend bool operator==(const InteractionEvent&, const InteractionEvent&) = default;
};

struct PoseSample {
  ScenarioKey scenario;
  Pose pose;
  TimestampMs at = 0;

  friend bool operator==(const PoseSample&, const PoseSample&) = default;
};

enum class UiType { InputControl, NavigationalComponent, InformationalComponent };

inline constexpr std::array<UiType, 3> kAllUiTypes{
    UiType::InputControl, UiType::NavigationalComponent, UiType::InformationalComponent};

std::string_view to_string(UiType type) noexcept;
std::optional<UiType> parse_ui_type(std::string_view text) noexcept;

enum class ActivityType { Primary, Peripheral, Ambient };

inline constexpr std::array<ActivityType, 3> kAllActivityTypes{
    ActivityType::Primary, ActivityType::Peripheral, ActivityType::Ambient};

std::string_view to_string(ActivityType type) noexcept;
std::optional<ActivityType> parse_activity_type(std::string_view text) noexcept;

struct Annotation {
  WidgetId widget_id;
  std::string app_name;
  std::string screenshot_desc;
  std::string widget_desc;
  std::string functionality;
  std::string excluded_parts;
  std::set<UiType> ui_types;
  std::string category;
  std::optional<std::string> cluster_id;
  std::optional<ActivityType> activity_type;
  std::uint64_t version = 0;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct Layout {
  ScenarioKey scenario;
  std::map<WidgetId, Pose> placements;
  Seq as_of_seq = 0;

  friend bool operator==(const Layout&, const Layout&) = default;
};

struct Cluster {
  std::string id;
  ScenarioKey scenario;
  std::set<WidgetId> widget_ids;
  std::optional<ActivityType> activity_type;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

}  // namespace layoutminer

template <>
struct std::hash<layoutminer::ScenarioKey> {
  std::size_t operator()(const layoutminer::ScenarioKey& key) const noexcept;
};
