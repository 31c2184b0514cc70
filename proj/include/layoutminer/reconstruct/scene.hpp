#pragma once

#include <optional>
#include <string>
#include <vector>

#include "layoutminer/core/json_io.hpp"
#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"

namespace layoutminer {

inline constexpr const char* kSceneSchemaVersion = "layoutminer.scene/1";
inline constexpr const char* kSceneFileExtension = ".scene.json";
inline constexpr double kDefaultQuadWidthM = 0.30;

struct SceneOptions {
  double quad_width_m = kDefaultQuadWidthM;
  // Turn every quad half a turn about its local up axis.
  bool flip_normals = false;
  std::vector<std::string> overlay_refs;
};

struct SceneWidget {
  WidgetId widget_id;
  BlobHash image_ref;
  Pose pose;
  double width_m = 0.0;
  double height_m = 0.0;
  // Where the crop aspect came from: "screenshot", "widget_image" or "crop".
  std::string aspect_source;

  bool operator==(const SceneWidget&) const = default;
};

struct SceneFile {
  ScenarioKey scenario;
  Seq as_of_seq = 0;
  double quad_width_m = kDefaultQuadWidthM;
  bool flip_normals = false;
  std::vector<SceneWidget> widgets;
  std::vector<std::string> overlay_refs;

  bool operator==(const SceneFile&) const = default;
};

Json to_json(const SceneFile& scene);
SceneFile scene_from_json(const Json& j);
// Pretty-printed JSON with a trailing newline; reals use 9 significant digits.
std::string serialize_scene(const SceneFile& scene);

// Width over height of a widget's crop in source pixels, with its source.
struct CropAspect {
  double aspect = 1.0;
  std::string source;
};
CropAspect crop_aspect(const EventStore& store, const Widget& widget);

// The layout after folding events with seq <= as_of_seq (default: all).
// Error(UnknownScenario) for unregistered scenarios, Error(InvalidArgument)
// for an as_of_seq beyond the log or a non-positive quad width.
SceneFile export_scene(const EventStore& store, const ScenarioKey& scenario,
                       std::optional<Seq> as_of_seq = std::nullopt, const SceneOptions& options = {});

// One scene per event: element k-1 equals export_scene(..., k).
std::vector<SceneFile> step_history(const EventStore& store, const ScenarioKey& scenario,
                                    const SceneOptions& options = {});

}  // namespace layoutminer
