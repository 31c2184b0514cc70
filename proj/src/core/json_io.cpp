#include "layoutminer/core/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "layoutminer/core/error.hpp"

namespace layoutminer {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

double round_sig9(double value) {
  if (!std::isfinite(value)) return value;
  return std::strtod(format_real(value).c_str(), nullptr);
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const Json& field(const Json& j, const char* name) {
  if (!j.is_object()) bad(std::string("expected object holding '") + name + "'");
  auto it = j.find(name);
  if (it == j.end()) bad(std::string("missing field '") + name + "'");
  return *it;
}

double number(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number()) bad(std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::string text(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_string()) bad(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

std::string text_or(const Json& j, const char* name, std::string fallback) {
  auto it = j.find(name);
  if (it == j.end() || it->is_null()) return fallback;
  if (!it->is_string()) bad(std::string("field '") + name + "' must be a string");
  return it->get<std::string>();
}

std::int64_t integer(const Json& j, const char* name) {
  const auto& v = field(j, name);
  if (!v.is_number_integer()) bad(std::string("field '") + name + "' must be an integer");
  return v.get<std::int64_t>();
}

double maybe_round(double v, bool round) { return round ? round_sig9(v) : v; }

}  // namespace

Json to_json(const ScenarioKey& key) {
  return Json{{"participant_id", key.participant_id},
              {"environment", key.environment},
              {"task", key.task}};
}

Json to_json(const Pose& pose, bool round) {
  const auto& p = pose.position;
  const auto& q = pose.orientation;
  return Json{{"px", maybe_round(p.x, round)}, {"py", maybe_round(p.y, round)},
              {"pz", maybe_round(p.z, round)}, {"qw", maybe_round(q.w, round)},
              {"qx", maybe_round(q.x, round)}, {"qy", maybe_round(q.y, round)},
              {"qz", maybe_round(q.z, round)}};
}

Json to_json(const CropRegion& crop) {
  return Json{{"x0", crop.x0}, {"y0", crop.y0}, {"x1", crop.x1}, {"y1", crop.y1}};
}

Json to_json(const InteractionEvent& event) {
  return Json{{"seq", event.seq},
              {"widget_id", event.widget_id},
              {"kind", to_string(event.kind)},
              {"pose", to_json(event.pose)},
              {"at_ms", event.at}};
}

Json to_json(const Layout& layout) {
  Json placements = Json::array();
  for (const auto& [id, pose] : layout.placements) {
    placements.push_back(Json{{"widget_id", id}, {"pose", to_json(pose)}});
  }
  return Json{{"scenario", to_json(layout.scenario)},
              {"as_of_seq", layout.as_of_seq},
              {"placements", std::move(placements)}};
}

Json to_json(const Annotation& a) {
  Json types = Json::array();
  for (auto t : a.ui_types) types.push_back(to_string(t));
  return Json{{"widget_id", a.widget_id},
              {"app_name", a.app_name},
              {"screenshot_desc", a.screenshot_desc},
              {"widget_desc", a.widget_desc},
              {"functionality", a.functionality},
              {"excluded_parts", a.excluded_parts},
              {"ui_types", std::move(types)},
              {"category", a.category},
              {"cluster_id", a.cluster_id ? Json(*a.cluster_id) : Json(nullptr)},
              {"activity_type",
               a.activity_type ? Json(std::string(to_string(*a.activity_type))) : Json(nullptr)},
              {"version", a.version}};
}

Json to_json(const Screenshot& s) {
  return Json{{"screenshot_id", s.id},
              {"participant_id", s.participant_id},
              {"image_hash", s.image_ref},
              {"app_hint", s.app_hint ? Json(*s.app_hint) : Json(nullptr)},
              {"captured_at_ms", s.captured_at},
              {"redacted", s.redacted}};
}

Json to_json(const Widget& w) {
  return Json{{"widget_id", w.id},
              {"screenshot_id", w.screenshot_id},
              {"crop", to_json(w.crop)},
              {"image_hash", w.image_ref},
              {"created_at_ms", w.created_at}};
}

Json to_json(const PoseSample& sample) {
  return Json{{"scenario", to_json(sample.scenario)},
              {"pose", to_json(sample.pose)},
              {"at_ms", sample.at}};
}

ScenarioKey scenario_from_json(const Json& j) {
  return ScenarioKey{text(j, "participant_id"), text(j, "environment"), text(j, "task")};
}

Pose pose_from_json(const Json& j) {
  Pose pose;
  pose.position = {number(j, "px"), number(j, "py"), number(j, "pz")};
  pose.orientation = {number(j, "qw"), number(j, "qx"), number(j, "qy"), number(j, "qz")};
  return pose;
}

CropRegion crop_from_json(const Json& j) {
  return CropRegion{number(j, "x0"), number(j, "y0"), number(j, "x1"), number(j, "y1")};
}

InteractionEvent event_from_json(const Json& j, const ScenarioKey& scenario) {
  InteractionEvent event;
  const auto seq = integer(j, "seq");
  if (seq <= 0) bad("seq must be positive");
  event.seq = static_cast<Seq>(seq);
  event.scenario = scenario;
  event.widget_id = text(j, "widget_id");
  auto kind = parse_event_kind(text(j, "kind"));
  if (!kind) bad("kind must be add or update");
  event.kind = *kind;
  event.pose = pose_from_json(field(j, "pose"));
  event.at = integer(j, "at_ms");
  return event;
}

Layout layout_from_json(const Json& j) {
  Layout layout;
  layout.scenario = scenario_from_json(field(j, "scenario"));
  const auto as_of = integer(j, "as_of_seq");
  if (as_of < 0) bad("as_of_seq must be non-negative");
  layout.as_of_seq = static_cast<Seq>(as_of);
  const auto& placements = field(j, "placements");
  if (!placements.is_array()) bad("placements must be an array");
  for (const auto& p : placements) {
    layout.placements[text(p, "widget_id")] = pose_from_json(field(p, "pose"));
  }
  return layout;
}

Annotation annotation_from_json(const Json& j) {
  Annotation a;
  a.widget_id = text_or(j, "widget_id", "");
  a.app_name = text_or(j, "app_name", "");
  a.screenshot_desc = text_or(j, "screenshot_desc", "");
  a.widget_desc = text_or(j, "widget_desc", "");
  a.functionality = text_or(j, "functionality", "");
  a.excluded_parts = text_or(j, "excluded_parts", "");
  a.category = text(j, "category");
  const auto& types = field(j, "ui_types");
  if (!types.is_array()) bad("ui_types must be an array");
  for (const auto& t : types) {
    if (!t.is_string()) bad("ui_types entries must be strings");
    auto parsed = parse_ui_type(t.get<std::string>());
    if (!parsed) throw Error(ErrorCode::InvalidUiType, "unknown ui type '" + t.get<std::string>() + "'");
    a.ui_types.insert(*parsed);
  }
  auto cluster = text_or(j, "cluster_id", "");
  if (!cluster.empty()) a.cluster_id = cluster;
  auto activity = text_or(j, "activity_type", "");
  if (!activity.empty()) {
    auto parsed = parse_activity_type(activity);
    if (!parsed) bad("activity_type must be Primary, Peripheral or Ambient");
    a.activity_type = *parsed;
  }
  if (auto it = j.find("version"); it != j.end() && !it->is_null()) {
    if (!it->is_number_unsigned() && !(it->is_number_integer() && it->get<std::int64_t>() >= 0)) {
      bad("version must be a non-negative integer");
    }
    a.version = it->get<std::uint64_t>();
  }
  return a;
}

Screenshot screenshot_from_json(const Json& j) {
  Screenshot s;
  s.id = text(j, "screenshot_id");
  s.participant_id = text(j, "participant_id");
  s.image_ref = text(j, "image_hash");
  auto hint = text_or(j, "app_hint", "");
  if (auto it = j.find("app_hint"); it != j.end() && !it->is_null()) s.app_hint = hint;
  s.captured_at = integer(j, "captured_at_ms");
  if (auto it = j.find("redacted"); it != j.end()) s.redacted = it->get<bool>();
  return s;
}

Widget widget_from_json(const Json& j) {
  Widget w;
  w.id = text(j, "widget_id");
  w.screenshot_id = text(j, "screenshot_id");
  w.crop = crop_from_json(field(j, "crop"));
  w.image_ref = text(j, "image_hash");
  w.created_at = integer(j, "created_at_ms");
  return w;
}

}  // namespace layoutminer
