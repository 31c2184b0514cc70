#include "layoutminer/reconstruct/scene.hpp"

#include <cmath>
#include <map>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"
#include "layoutminer/core/pose.hpp"
#include "layoutminer/reconstruct/image_info.hpp"

namespace layoutminer {

namespace {

// Half a turn about the local y axis.
constexpr Quaternion kFlip{0.0, 0.0, 1.0, 0.0};

Json widget_json(const SceneWidget& w) {
  return {{"widget_id", w.widget_id},
          {"image_ref", w.image_ref},
          {"pose", to_json(w.pose, true)},
          {"width_m", round_sig9(w.width_m)},
          {"height_m", round_sig9(w.height_m)},
          {"aspect_source", w.aspect_source}};
}

template <typename T>
T field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    throw Error(ErrorCode::InvalidArgument, std::string("scene is missing '") + name + "'");
  }
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("scene field '") + name + "' has the wrong type");
  }
}

class SceneBuilder {
 public:
  SceneBuilder(const EventStore& store, const SceneOptions& options) : store_(store), options_(options) {
    if (!std::isfinite(options.quad_width_m) || options.quad_width_m <= 0.0) {
      throw Error(ErrorCode::InvalidArgument, "quad width must be a positive length");
    }
  }

  SceneFile build(const Layout& layout) {
    SceneFile scene;
    scene.scenario = layout.scenario;
    scene.as_of_seq = layout.as_of_seq;
    scene.quad_width_m = options_.quad_width_m;
    scene.flip_normals = options_.flip_normals;
    scene.overlay_refs = options_.overlay_refs;
    for (const auto& [id, pose] : layout.placements) {
      const auto& info = info_for(id);
      SceneWidget w;
      w.widget_id = id;
      w.image_ref = info.image_ref;
      w.pose = pose;
      if (options_.flip_normals) w.pose.orientation = quaternion_multiply(pose.orientation, kFlip);
      w.width_m = options_.quad_width_m;
      w.height_m = options_.quad_width_m / info.aspect.aspect;
      w.aspect_source = info.aspect.source;
      scene.widgets.push_back(std::move(w));
    }
    return scene;
  }

 private:
  struct WidgetInfo {
    BlobHash image_ref;
    CropAspect aspect;
  };

  const WidgetInfo& info_for(const WidgetId& id) {
    auto it = cache_.find(id);
    if (it != cache_.end()) return it->second;
    const auto widget = store_.widget(id);
    if (!widget) throw Error(ErrorCode::DanglingReference, "unknown widget " + id);
    return cache_.emplace(id, WidgetInfo{widget->image_ref, crop_aspect(store_, *widget)}).first->second;
  }

  const EventStore& store_;
  const SceneOptions& options_;
  std::map<WidgetId, WidgetInfo> cache_;
};

}  // namespace

Json to_json(const SceneFile& scene) {
  Json widgets = Json::array();
  for (const auto& w : scene.widgets) widgets.push_back(widget_json(w));
  return {{"schema", kSceneSchemaVersion},
          {"scenario", to_json(scene.scenario)},
          {"as_of_seq", scene.as_of_seq},
          {"quad_width_m", round_sig9(scene.quad_width_m)},
          {"flip_normals", scene.flip_normals},
          {"widgets", std::move(widgets)},
          {"overlay_refs", scene.overlay_refs}};
}

SceneFile scene_from_json(const Json& j) {
  if (field<std::string>(j, "schema") != kSceneSchemaVersion) {
    throw Error(ErrorCode::SchemaMismatch, "unsupported scene schema");
  }
  SceneFile scene;
  scene.scenario = scenario_from_json(field<Json>(j, "scenario"));
  scene.as_of_seq = field<Seq>(j, "as_of_seq");
  scene.quad_width_m = field<double>(j, "quad_width_m");
  scene.flip_normals = field<bool>(j, "flip_normals");
  scene.overlay_refs = field<std::vector<std::string>>(j, "overlay_refs");
  for (const auto& w : field<Json>(j, "widgets")) {
    SceneWidget sw;
    sw.widget_id = field<std::string>(w, "widget_id");
    sw.image_ref = field<std::string>(w, "image_ref");
    sw.pose = pose_from_json(field<Json>(w, "pose"));
    sw.width_m = field<double>(w, "width_m");
    sw.height_m = field<double>(w, "height_m");
    sw.aspect_source = field<std::string>(w, "aspect_source");
    scene.widgets.push_back(std::move(sw));
  }
  return scene;
}

std::string serialize_scene(const SceneFile& scene) { return to_json(scene).dump(2) + "\n"; }

CropAspect crop_aspect(const EventStore& store, const Widget& widget) {
  const double cw = widget.crop.width();
  const double ch = widget.crop.height();
  if (const auto shot = store.screenshot(widget.screenshot_id)) {
    if (const auto bytes = store.get_blob(shot->image_ref)) {
      if (const auto size = sniff_image_size(*bytes)) {
        return {cw * size->width / (ch * size->height), "screenshot"};
      }
    }
  }
  if (const auto bytes = store.get_blob(widget.image_ref)) {
    if (const auto size = sniff_image_size(*bytes)) {
      return {static_cast<double>(size->width) / size->height, "widget_image"};
    }
  }
  return {cw / ch, "crop"};
}

SceneFile export_scene(const EventStore& store, const ScenarioKey& scenario,
                       std::optional<Seq> as_of_seq, const SceneOptions& options) {
  SceneBuilder builder(store, options);
  const auto events = store.events(scenario);
  const Seq limit = as_of_seq.value_or(events.size());
  if (limit > events.size()) {
    throw Error(ErrorCode::InvalidArgument, "as_of_seq " + std::to_string(limit) + " is beyond the log (" +
                                                std::to_string(events.size()) + " events)");
  }
  return builder.build(fold_events(scenario, std::span(events).first(limit)));
}

std::vector<SceneFile> step_history(const EventStore& store, const ScenarioKey& scenario,
                                    const SceneOptions& options) {
  SceneBuilder builder(store, options);
  const auto events = store.events(scenario);
  std::vector<SceneFile> scenes;
  Layout layout;
  layout.scenario = scenario;
  for (const auto& e : events) {
    apply_event(layout, e);
    scenes.push_back(builder.build(layout));
  }
  return scenes;
}

}  // namespace layoutminer
