#include <doctest.h>

#include <fstream>

#include "layoutminer/core/error.hpp"
#include "layoutminer/store/dataset_io.hpp"
#include "layoutminer/store/hash.hpp"
#include "support.hpp"

using namespace layoutminer;
using namespace lm_test;
namespace fs = std::filesystem;

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

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
}

std::map<std::string, std::string> tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).string()] = slurp(entry.path());
  }
  return files;
}

// 10 widgets across two participants and three scenarios, with awkward text.
void build_fixture(EventStore& store) {
  const auto shot_a = store.put_blob("screenshot A");
  const auto shot_b = store.put_blob("screenshot B");
  store.put_screenshot(Screenshot{"sA", "P01", shot_a, "Mail, \"Pro\"", 1700000000123, false});
  store.put_screenshot(Screenshot{"sB", "P02", shot_b, std::nullopt, 42, true});
  for (int i = 0; i < 10; ++i) {
    const auto id = "w" + std::to_string(i);
    const auto img = store.put_blob("widget image " + id);
    const CropRegion crop = i % 3 == 0 ? CropRegion{0, 0, 1, 1}
                                       : CropRegion{0.1 * (i % 4), 0.05, 0.9, 1.0 / 3.0 + 0.5};
    store.put_widget(Widget{id, i < 6 ? "sA" : "sB", crop, img, 1000 + i});
  }
  const auto k1 = scenario("P01", "office", "focused work");
  const auto k2 = scenario("P01", "coffee shop", "relax");
  const auto k3 = scenario("P02", "kitchen", "cooking, with friends");
  for (int i = 0; i < 6; ++i) {
    store.append_event(i < 4 ? k1 : k2, "w" + std::to_string(i), EventKind::Add,
                       pose_at_yaw(0.1 * i + 1.0 / 7.0, 1.5, -2.25, 0.3 * i), 5000 + i);
  }
  store.append_event(k1, "w1", EventKind::Update, pose_at_yaw(2.0 / 3.0, 1, 1, 1.1), 6000);
  for (int i = 6; i < 10; ++i) {
    store.append_event(k3, "w" + std::to_string(i), EventKind::Add, pose_at(i * 0.123456789123), 7);
  }
  store.append_event(k3, "w2", EventKind::Add, pose_at(5), 8);  // widget reused across scenarios
  for (int i = 0; i < 5; ++i) store.append_pose_sample(PoseSample{k1, pose_at_yaw(0, 1.6, 0, 0.1 * i), 100 * i});
  store.put_scenario(scenario("P02", "living room", "workout"));

  for (int i = 0; i < 10; i += 2) {
    Annotation a;
    a.widget_id = "w" + std::to_string(i);
    a.app_name = i == 0 ? "Mail" : "Café \"Ünïcode\"";
    a.screenshot_desc = "inbox,\nmultiline";
    a.widget_desc = "list";
    a.functionality = "Email inbox";
    a.excluded_parts = "";
    a.ui_types = {UiType::InformationalComponent, UiType::NavigationalComponent};
    a.category = "Productivity";
    if (i < 6) a.cluster_id = "c" + std::to_string(i / 4);
    if (i == 2) a.activity_type = ActivityType::Ambient;
    store.upsert_annotation(a, 0);
    if (i == 4) store.upsert_annotation(a, 1);
  }
}

}  // namespace

TEST_CASE("export of an empty store") {
  TempDir dir;
  auto store = EventStore::in_memory();
  const auto manifest = export_dataset(*store, dir / "out");
  CHECK(manifest == DatasetManifest{});
  CHECK(slurp(dir / "out/events.csv") ==
        "scenario_participant,scenario_environment,scenario_task,seq,widget_id,kind,px,py,pz,qw,qx,qy,qz,at_ms\n");
  auto fresh = EventStore::in_memory();
  CHECK(import_dataset(*fresh, dir / "out") == DatasetManifest{});
}

TEST_CASE("exported headers match the documented columns") {
  TempDir dir;
  auto store = EventStore::in_memory();
  export_dataset(*store, dir.path());
  CHECK(slurp(dir / "widgets.csv") ==
        "widget_id,screenshot_id,crop_x0,crop_y0,crop_x1,crop_y1,image_hash,created_at_ms\n");
  CHECK(slurp(dir / "screenshots.csv") ==
        "screenshot_id,participant_id,image_hash,app_hint,captured_at_ms,redacted\n");
  CHECK(slurp(dir / "annotations.csv") ==
        "widget_id,app_name,screenshot_desc,widget_desc,functionality,excluded_parts,ui_types,category,cluster_id,activity_type,version\n");
}

TEST_CASE("export -> import -> export is a fixed point") {
  TempDir dir;
  auto original = EventStore::in_memory();
  build_fixture(*original);
  const auto first = export_dataset(*original, dir / "a");
  CHECK(first.widgets == 10);
  CHECK(first.screenshots == 2);
  CHECK(first.scenarios == 4);
  CHECK(first.events == 12);
  CHECK(first.pose_samples == 5);
  CHECK(first.annotations == 5);
  CHECK(first.blobs == 12);

  auto imported = EventStore::open(dir / "store");
  CHECK(import_dataset(*imported, dir / "a") == first);
  const auto second = export_dataset(*imported, dir / "b");
  CHECK(second == first);
  CHECK(tree(dir / "a") == tree(dir / "b"));

  // Record-identical: a second import of the re-export matches the first import.
  auto again = EventStore::in_memory();
  import_dataset(*again, dir / "b");
  const auto s1 = imported->snapshot();
  const auto s2 = again->snapshot();
  CHECK(s1.events == s2.events);
  CHECK(s1.widgets == s2.widgets);
  CHECK(s1.screenshots == s2.screenshots);
  CHECK(s1.annotations == s2.annotations);
  CHECK(s1.pose_samples == s2.pose_samples);
  CHECK(s1.blobs == s2.blobs);

  // Timestamps are preserved verbatim, both wall-clock and relative ones.
  CHECK(imported->screenshot("sA")->captured_at == 1700000000123);
  CHECK(imported->screenshot("sB")->captured_at == 42);
  CHECK(imported->annotation("w4")->version == 2);
  CHECK(imported->annotation("w0")->app_name == "Mail");
  CHECK(imported->annotation("w2")->app_name == "Café \"Ünïcode\"");

  // Re-importing into the same store is a no-op.
  CHECK(import_dataset(*imported, dir / "a") == first);
  CHECK(imported->snapshot().events == s1.events);
  CHECK(imported->snapshot().pose_samples == s1.pose_samples);

  // Reopened from disk, the imported store still exports the same bytes.
  imported.reset();
  auto reopened = EventStore::open(dir / "store");
  export_dataset(*reopened, dir / "c");
  CHECK(tree(dir / "a") == tree(dir / "c"));
}

TEST_CASE("import rejects malformed datasets") {
  TempDir dir;
  auto original = EventStore::in_memory();
  build_fixture(*original);
  export_dataset(*original, dir / "good");

  auto copy = [&](const std::string& name) {
    fs::copy(dir / "good", dir / name, fs::copy_options::recursive);
    return dir / name;
  };

  SUBCASE("unknown column") {
    const auto d = copy("extra_col");
    auto text = slurp(d / "widgets.csv");
    text.replace(text.find("created_at_ms"), 13, "created_at_ms,colour");
    spit(d / "widgets.csv", text);
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::SchemaMismatch);
  }
  SUBCASE("missing table") {
    const auto d = copy("no_events");
    fs::remove(d / "events.csv");
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::SchemaMismatch);
  }
  SUBCASE("bad cell") {
    const auto d = copy("bad_cell");
    auto text = slurp(d / "screenshots.csv");
    text.replace(text.find(",1700000000123,"), 15, ",yesterday,");
    spit(d / "screenshots.csv", text);
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::SchemaMismatch);
  }
  SUBCASE("missing blob") {
    const auto d = copy("missing_blob");
    fs::remove(d / "images" / sha256_hex("screenshot A"));
    auto manifest = slurp(d / "manifest.json");
    manifest.replace(manifest.find("\"blobs\": 12"), 11, "\"blobs\": 11");
    spit(d / "manifest.json", manifest);
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::MissingBlob);
  }
  SUBCASE("tampered blob") {
    const auto d = copy("tampered");
    spit(d / "images" / sha256_hex("screenshot A"), "not the original");
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::IntegrityError);
  }
  SUBCASE("manifest count mismatch") {
    const auto d = copy("counts");
    auto manifest = slurp(d / "manifest.json");
    manifest.replace(manifest.find("\"widgets\": 10"), 13, "\"widgets\": 11");
    spit(d / "manifest.json", manifest);
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::SchemaMismatch);
  }
  SUBCASE("seq gap") {
    const auto d = copy("gap");
    auto text = slurp(d / "events.csv");
    const auto pos = text.find(",4,w");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 4, ",9,w");
    spit(d / "events.csv", text);
    CHECK(code_of([&] { import_dataset(*EventStore::in_memory(), d); }) == ErrorCode::NonMonotonicSeq);
  }
  SUBCASE("failed import writes nothing") {
    const auto d = copy("atomic");
    fs::remove(d / "images" / sha256_hex("widget image w9"));
    auto target = EventStore::in_memory();
    CHECK_THROWS_AS(import_dataset(*target, d), Error);
    const auto snap = target->snapshot();
    CHECK(snap.widgets.empty());
    CHECK(snap.events.empty());
    CHECK(snap.blobs.empty());
  }
}
