#include <doctest.h>

#include <random>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/pose.hpp"
#include "layoutminer/reconstruct/image_info.hpp"
#include "layoutminer/reconstruct/scene.hpp"
#include "support.hpp"

using namespace layoutminer;
using namespace lm_test;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

std::string png_header(std::uint32_t w, std::uint32_t h) {
  std::string b = "\x89PNG\r\n\x1a\n";
  b += std::string("\0\0\0\x0d", 4) + "IHDR";
  for (const auto v : {w, h}) {
    for (int shift = 24; shift >= 0; shift -= 8) b += static_cast<char>((v >> shift) & 0xFF);
  }
  b += std::string(5, '\0');
  return b;
}

std::string gif_header(std::uint16_t w, std::uint16_t h) {
  std::string b = "GIF89a";
  b += static_cast<char>(w & 0xFF);
  b += static_cast<char>(w >> 8);
  b += static_cast<char>(h & 0xFF);
  b += static_cast<char>(h >> 8);
  return b + std::string(4, '\0');
}

std::string jpeg_header(std::uint16_t w, std::uint16_t h) {
  std::string b = "\xFF\xD8";
  // APP0 segment of length 16, then a baseline frame header.
  b += std::string("\xFF\xE0\x00\x10", 4) + std::string(14, 'j');
  b += std::string("\xFF\xC0\x00\x11\x08", 5);
  b += static_cast<char>(h >> 8);
  b += static_cast<char>(h & 0xFF);
  b += static_cast<char>(w >> 8);
  b += static_cast<char>(w & 0xFF);
  return b + std::string(10, '\0');
}

std::vector<InteractionEvent> random_events(EventStore& store, std::mt19937_64& rng, const ScenarioKey& key) {
  std::vector<WidgetId> ids;
  for (const char* id : {"w000", "w001", "w002", "w003", "w004", "w005"}) ids.push_back(id);
  seed_widgets(store, ids);
  const auto log = random_log(rng, key, 1 + rng() % 6, rng() % 10);
  for (const auto& e : log) store.append_event(key, e.widget_id, e.kind, e.pose, e.at);
  return store.events(key);
}

}  // namespace

TEST_CASE("image sniffing") {
  CHECK(sniff_image_size(png_header(1170, 2532))->width == 1170);
  CHECK(sniff_image_size(png_header(1170, 2532))->height == 2532);
  CHECK(sniff_image_size(gif_header(320, 200))->height == 200);
  const auto jpeg = sniff_image_size(jpeg_header(640, 480));
  REQUIRE(jpeg);
  CHECK(jpeg->width == 640);
  CHECK(jpeg->height == 480);
  CHECK_FALSE(sniff_image_size("plain text"));
  CHECK_FALSE(sniff_image_size(png_header(0, 10)));
  CHECK_FALSE(sniff_image_size(std::string("\xFF\xD8\xFF", 3)));
}

TEST_CASE("crop aspect uses source pixels") {
  auto store = EventStore::in_memory();
  const auto shot = store->put_blob(png_header(1000, 2000));
  store->put_screenshot(Screenshot{"s1", "P01", shot, std::nullopt, 0, false});
  // Half the width and a quarter of the height: 500 x 500 pixels.
  store->put_widget(Widget{"w1", "s1", {0, 0, 0.5, 0.25}, store->put_blob("opaque"), 0});
  const auto a = crop_aspect(*store, *store->widget("w1"));
  CHECK(a.aspect == doctest::Approx(1.0));
  CHECK(a.source == "screenshot");

  store->put_screenshot(Screenshot{"s2", "P01", store->put_blob("unknown format"), std::nullopt, 0, false});
  store->put_widget(Widget{"w2", "s2", {0, 0, 0.5, 0.25}, store->put_blob(gif_header(300, 100)), 0});
  CHECK(crop_aspect(*store, *store->widget("w2")).aspect == doctest::Approx(3.0));
  CHECK(crop_aspect(*store, *store->widget("w2")).source == "widget_image");

  store->put_widget(Widget{"w3", "s2", {0, 0, 0.5, 0.25}, store->put_blob("raw"), 0});
  CHECK(crop_aspect(*store, *store->widget("w3")).aspect == doctest::Approx(2.0));
  CHECK(crop_aspect(*store, *store->widget("w3")).source == "crop");

  const auto key = scenario();
  store->append_event(key, "w1", EventKind::Add, pose_at(0));
  const auto scene = export_scene(*store, key, std::nullopt, SceneOptions{0.4, false, {"scans/office.usdz"}});
  REQUIRE(scene.widgets.size() == 1);
  CHECK(scene.widgets[0].width_m == 0.4);
  CHECK(scene.widgets[0].height_m == doctest::Approx(0.4));
  CHECK(scene.overlay_refs == std::vector<std::string>{"scans/office.usdz"});
}

TEST_CASE("export_scene examples") {
  auto store = EventStore::in_memory();
  seed_widgets(*store, {"w1", "w2"});
  const auto key = scenario();
  store->append_event(key, "w1", EventKind::Add, pose_at(1));
  store->append_event(key, "w2", EventKind::Add, pose_at(2));
  store->append_event(key, "w1", EventKind::Update, pose_at(3));

  CHECK(export_scene(*store, key, 0).widgets.empty());
  const auto full = export_scene(*store, key);
  CHECK(full.as_of_seq == 3);
  REQUIRE(full.widgets.size() == 2);
  CHECK(full.widgets[0].pose == pose_at(3));
  const auto mid = export_scene(*store, key, 2);
  CHECK(mid.widgets[0].pose == pose_at(1));
  CHECK(code_of([&] { export_scene(*store, scenario("P09")); }) == ErrorCode::UnknownScenario);
  CHECK(code_of([&] { export_scene(*store, key, 4); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] { export_scene(*store, key, std::nullopt, SceneOptions{0.0}); }) ==
        ErrorCode::InvalidArgument);

  const auto steps = step_history(*store, key);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].widgets.size() == 1);
  // The last step differs from the previous only in the updated widget's pose.
  CHECK(steps[2].widgets[1] == steps[1].widgets[1]);
  CHECK(steps[2].widgets[0].pose != steps[1].widgets[0].pose);
  CHECK(steps[2].widgets[0].widget_id == steps[1].widgets[0].widget_id);

  store->put_scenario(scenario("P01", "office", "empty"));
  CHECK(step_history(*store, scenario("P01", "office", "empty")).empty());
}

TEST_CASE("step history agrees with prefix folds and the final export") {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 50; ++round) {
    auto store = EventStore::in_memory();
    const auto key = scenario();
    const auto log = random_events(*store, rng, key);
    const auto steps = step_history(*store, key);
    REQUIRE(steps.size() == log.size());
    for (std::size_t k = 1; k <= log.size(); ++k) {
      const auto expected = oracle_layout(log, k);
      const auto& scene = steps[k - 1];
      CHECK(scene.as_of_seq == k);
      REQUIRE(scene.widgets.size() == expected.size());
      for (const auto& w : scene.widgets) CHECK(w.pose == expected.at(w.widget_id));
      CHECK(serialize_scene(scene) == serialize_scene(export_scene(*store, key, k)));
    }
    CHECK(serialize_scene(steps.back()) == serialize_scene(export_scene(*store, key)));
  }
}

TEST_CASE("scene files round-trip poses within 1e-6 m") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  auto store = EventStore::in_memory();
  seed_widgets(*store, {"w1"});
  const auto key = scenario();
  store->append_event(key, "w1", EventKind::Add, pose_at(0));
  for (int i = 0; i < 200; ++i) {
    const auto pose = pose_at_yaw(coord(rng), coord(rng), coord(rng), coord(rng));
    store->append_event(key, "w1", EventKind::Update, pose);
    const auto scene = export_scene(*store, key);
    const auto parsed = scene_from_json(Json::parse(serialize_scene(scene)));
    CHECK(distance(parsed.widgets[0].pose.position, pose.position) <= 1e-6);
    CHECK(std::abs(quaternion_dot(parsed.widgets[0].pose.orientation, pose.orientation)) >= 1 - 1e-9);
    CHECK(parsed.as_of_seq == scene.as_of_seq);
    CHECK(serialize_scene(parsed) == serialize_scene(scene));
  }
}

TEST_CASE("flipped normals turn quads half a turn") {
  auto store = EventStore::in_memory();
  seed_widgets(*store, {"w1"});
  const auto key = scenario();
  store->append_event(key, "w1", EventKind::Add, pose_at(0));
  SceneOptions options;
  options.flip_normals = true;
  const auto scene = export_scene(*store, key, std::nullopt, options);
  CHECK(scene.flip_normals);
  const auto q = scene.widgets[0].pose.orientation;
  CHECK(std::abs(quaternion_dot(q, Quaternion{0, 0, 1, 0})) == doctest::Approx(1.0));
  CHECK(scene.widgets[0].pose.position == pose_at(0).position);
}
