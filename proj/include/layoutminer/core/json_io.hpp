#pragma once

#include <string>

#include <json.hpp>

#include "layoutminer/core/types.hpp"

namespace layoutminer {

using Json = nlohmann::ordered_json;

// Real numbers in exported files are written with 9 significant digits.
std::string format_real(double value);
double round_sig9(double value);

Json to_json(const ScenarioKey& key);
Json to_json(const Pose& pose, bool round = false);
Json to_json(const CropRegion& crop);
Json to_json(const InteractionEvent& event);
Json to_json(const Layout& layout);
Json to_json(const Annotation& annotation);
Json to_json(const Screenshot& screenshot);
Json to_json(const Widget& widget);
Json to_json(const PoseSample& sample);

// Parsers throw Error(InvalidArgument) on missing or mistyped fields.
ScenarioKey scenario_from_json(const Json& j);
Pose pose_from_json(const Json& j);
CropRegion crop_from_json(const Json& j);
InteractionEvent event_from_json(const Json& j, const ScenarioKey& scenario);
Layout layout_from_json(const Json& j);
// `version` is taken from the document when present, otherwise 0.
Annotation annotation_from_json(const Json& j);
Screenshot screenshot_from_json(const Json& j);
Widget widget_from_json(const Json& j);

}  // namespace layoutminer
