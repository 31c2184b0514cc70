#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutminer/core/json_io.hpp"
#include "layoutminer/core/types.hpp"

namespace layoutminer {

enum class StepAction { CreateWidget, Place, AdjustLast, Reselect, PoseSample };
std::string_view to_string(StepAction action) noexcept;
std::optional<StepAction> parse_step_action(std::string_view text) noexcept;

// One scripted phone interaction. Which fields matter depends on the action:
// CreateWidget uses the widget, crop and image fields; Place and Reselect use
// widget_id and pose; AdjustLast and PoseSample use pose only.
struct ScriptStep {
  TimestampMs at_ms = 0;
  StepAction action = StepAction::CreateWidget;
  WidgetId widget_id;
  Pose pose;
  CropRegion crop;
  std::string image;
  std::optional<ScreenshotId> screenshot_id;
  std::string screenshot_image;
  std::optional<std::string> app_hint;

  bool operator==(const ScriptStep&) const = default;
};

struct SessionScript {
  ScenarioKey scenario;
  std::string client_id = "sim-placement";
  std::vector<ScriptStep> steps;

  bool operator==(const SessionScript&) const = default;
};

// Error(ScriptError) naming the offending step when at_ms decreases or a
// Place/Reselect names a widget not created earlier in the script.
void validate_script(const SessionScript& script);

// Parsing validates; errors are Error(ScriptError).
SessionScript script_from_json(const Json& j);
Json to_json(const SessionScript& script);
SessionScript load_script(const std::filesystem::path& path);
void save_script(const SessionScript& script, const std::filesystem::path& path);

}  // namespace layoutminer
