#include "layoutminer/client/script.hpp"

#include <fstream>
#include <set>

#include "layoutminer/core/error.hpp"
#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace {

[[noreturn]] void script_error(const std::string& message) { throw Error(ErrorCode::ScriptError, message); }

[[noreturn]] void step_error(std::size_t index, const std::string& message) {
  script_error("step " + std::to_string(index) + ": " + message);
}

std::string bytes_field(const Json& payload, const char* name, std::string fallback, std::size_t index) {
  if (!payload.contains(name)) return fallback;
  if (!payload.at(name).is_string()) step_error(index, std::string(name) + " must be a string");
  auto bytes = base64_decode(payload.at(name).get<std::string>());
  if (!bytes) step_error(index, std::string(name) + " is not valid base64");
  return std::move(*bytes);
}

std::optional<std::string> optional_text(const Json& payload, const char* name, std::size_t index) {
  if (!payload.contains(name) || payload.at(name).is_null()) return std::nullopt;
  if (!payload.at(name).is_string()) step_error(index, std::string(name) + " must be a string");
  return payload.at(name).get<std::string>();
}

std::string required_text(const Json& payload, const char* name, std::size_t index) {
  auto value = optional_text(payload, name, index);
  if (!value || value->empty()) step_error(index, std::string("payload needs ") + name);
  return *value;
}

ScriptStep step_from_json(const Json& j, std::size_t index) {
  if (!j.is_object()) step_error(index, "must be an object");
  ScriptStep step;
  if (!j.contains("at_ms") || !j.at("at_ms").is_number_integer()) step_error(index, "at_ms must be an integer");
  step.at_ms = j.at("at_ms").get<TimestampMs>();
  if (!j.contains("action") || !j.at("action").is_string()) step_error(index, "action must be a string");
  const auto action = parse_step_action(j.at("action").get<std::string>());
  if (!action) step_error(index, "unknown action '" + j.at("action").get<std::string>() + "'");
  step.action = *action;
  const Json payload = j.value("payload", Json::object());
  if (!payload.is_object()) step_error(index, "payload must be an object");
  try {
    switch (step.action) {
      case StepAction::CreateWidget:
        step.widget_id = required_text(payload, "widget_id", index);
        if (payload.contains("crop")) step.crop = crop_from_json(payload.at("crop"));
        step.image = bytes_field(payload, "image_b64", "widget:" + step.widget_id, index);
        step.screenshot_id = optional_text(payload, "screenshot_id", index);
        step.screenshot_image = bytes_field(payload, "screenshot_b64",
                                            "screenshot:" + step.screenshot_id.value_or(step.widget_id), index);
        step.app_hint = optional_text(payload, "app_hint", index);
        break;
      case StepAction::Place:
      case StepAction::Reselect:
        step.widget_id = required_text(payload, "widget_id", index);
        step.pose = pose_from_json(payload.at("pose"));
        break;
      case StepAction::AdjustLast:
      case StepAction::PoseSample:
        step.pose = pose_from_json(payload.at("pose"));
        break;
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ScriptError) throw;
    step_error(index, e.detail());
  } catch (const nlohmann::json::exception&) {
    step_error(index, "payload needs pose");
  }
  return step;
}

Json step_to_json(const ScriptStep& step) {
  Json payload = Json::object();
  switch (step.action) {
    case StepAction::CreateWidget:
      payload["widget_id"] = step.widget_id;
      payload["crop"] = to_json(step.crop);
      payload["image_b64"] = base64_encode(step.image);
      if (step.screenshot_id) payload["screenshot_id"] = *step.screenshot_id;
      payload["screenshot_b64"] = base64_encode(step.screenshot_image);
      if (step.app_hint) payload["app_hint"] = *step.app_hint;
      break;
    case StepAction::Place:
    case StepAction::Reselect:
      payload["widget_id"] = step.widget_id;
      payload["pose"] = to_json(step.pose);
      break;
    case StepAction::AdjustLast:
    case StepAction::PoseSample:
      payload["pose"] = to_json(step.pose);
      break;
  }
  return Json{{"at_ms", step.at_ms}, {"action", to_string(step.action)}, {"payload", std::move(payload)}};
}

}  // namespace

std::string_view to_string(StepAction action) noexcept {
  switch (action) {
    case StepAction::CreateWidget: return "create_widget";
    case StepAction::Place: return "place";
    case StepAction::AdjustLast: return "adjust_last";
    case StepAction::Reselect: return "reselect";
    case StepAction::PoseSample: return "pose_sample";
  }
  return "unknown";
}

std::optional<StepAction> parse_step_action(std::string_view text) noexcept {
  for (auto action : {StepAction::CreateWidget, StepAction::Place, StepAction::AdjustLast, StepAction::Reselect,
                      StepAction::PoseSample}) {
    if (to_string(action) == text) return action;
  }
  return std::nullopt;
}

void validate_script(const SessionScript& script) {
  std::set<WidgetId> created;
  for (std::size_t i = 0; i < script.steps.size(); ++i) {
    const auto& step = script.steps[i];
    if (i > 0 && step.at_ms < script.steps[i - 1].at_ms) step_error(i, "at_ms decreases");
    if (step.action == StepAction::CreateWidget) created.insert(step.widget_id);
    if ((step.action == StepAction::Place || step.action == StepAction::Reselect) &&
        !created.contains(step.widget_id)) {
      step_error(i, "widget '" + step.widget_id + "' is not created earlier in the script");
    }
  }
}

SessionScript script_from_json(const Json& j) {
  if (!j.is_object()) script_error("script must be a JSON object");
  SessionScript script;
  if (!j.contains("scenario")) script_error("script needs a scenario");
  try {
    script.scenario = scenario_from_json(j.at("scenario"));
  } catch (const Error& e) {
    script_error("scenario: " + e.detail());
  }
  if (!script.scenario.valid()) script_error("scenario fields must be non-empty");
  if (j.contains("client_id")) {
    if (!j.at("client_id").is_string()) script_error("client_id must be a string");
    script.client_id = j.at("client_id").get<std::string>();
  }
  if (!j.contains("steps") || !j.at("steps").is_array()) script_error("steps must be an array");
  const auto& steps = j.at("steps");
  for (std::size_t i = 0; i < steps.size(); ++i) script.steps.push_back(step_from_json(steps[i], i));
  validate_script(script);
  return script;
}

Json to_json(const SessionScript& script) {
  Json steps = Json::array();
  for (const auto& step : script.steps) steps.push_back(step_to_json(step));
  return Json{{"scenario", to_json(script.scenario)}, {"client_id", script.client_id}, {"steps", std::move(steps)}};
}

SessionScript load_script(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  const auto j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) script_error(path.string() + " is not valid JSON");
  return script_from_json(j);
}

void save_script(const SessionScript& script, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  out << to_json(script).dump(2) << "\n";
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
}

}  // namespace layoutminer
