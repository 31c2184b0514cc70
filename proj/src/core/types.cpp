#include "layoutminer/core/types.hpp"

namespace layoutminer {

std::string ScenarioKey::to_string() const {
  return participant_id + "/" + environment + "/" + task;
}

std::optional<ScenarioKey> ScenarioKey::parse(std::string_view text) {
  const auto first = text.find('/');
  if (first == std::string_view::npos) return std::nullopt;
  const auto second = text.find('/', first + 1);
  if (second == std::string_view::npos) return std::nullopt;
  if (text.find('/', second + 1) != std::string_view::npos) return std::nullopt;
  ScenarioKey key{std::string(text.substr(0, first)),
                  std::string(text.substr(first + 1, second - first - 1)),
                  std::string(text.substr(second + 1))};
  if (!key.valid()) return std::nullopt;
  return key;
}

bool CropRegion::valid() const noexcept {
  return 0.0 <= x0 && x0 < x1 && x1 <= 1.0 && 0.0 <= y0 && y0 < y1 && y1 <= 1.0;
}

std::string_view to_string(EventKind kind) noexcept {
  return kind == EventKind::Add ? "add" : "update";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
  if (text == "add") return EventKind::Add;
  if (text == "update") return EventKind::Update;
  return std::nullopt;
}

std::string_view to_string(UiType type) noexcept {
  switch (type) {
    case UiType::InputControl: return "InputControl";
    case UiType::NavigationalComponent: return "NavigationalComponent";
    case UiType::InformationalComponent: return "InformationalComponent";
  }
  return "";
}

std::optional<UiType> parse_ui_type(std::string_view text) noexcept {
  for (auto type : kAllUiTypes) {
    if (to_string(type) == text) return type;
  }
  return std::nullopt;
}

std::string_view to_string(ActivityType type) noexcept {
  switch (type) {
    case ActivityType::Primary: return "Primary";
    case ActivityType::Peripheral: return "Peripheral";
    case ActivityType::Ambient: return "Ambient";
  }
  return "";
}

std::optional<ActivityType> parse_activity_type(std::string_view text) noexcept {
  for (auto type : kAllActivityTypes) {
    if (to_string(type) == text) return type;
  }
  return std::nullopt;
}

}  // namespace layoutminer

std::size_t std::hash<layoutminer::ScenarioKey>::operator()(
    const layoutminer::ScenarioKey& key) const noexcept {
  std::hash<std::string> h;
  std::size_t seed = h(key.participant_id);
  seed ^= h(key.environment) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  seed ^= h(key.task) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
  return seed;
}
