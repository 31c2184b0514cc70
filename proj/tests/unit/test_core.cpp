#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "layoutminer/core/categories.hpp"
#include "layoutminer/core/crop.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/core/pose.hpp"
#include "layoutminer/core/text.hpp"
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
}  // namespace

TEST_CASE("validate_pose") {
  CHECK_FALSE(validate_pose(Pose{{0, 0, 0}, {1, 0, 0, 0}}).has_value());
  CHECK(validate_pose(Pose{{0, 0, 0}, {2, 0, 0, 0}}) == ErrorCode::NonUnitQuaternion);
  CHECK(validate_pose(Pose{{std::nan(""), 0, 0}, {1, 0, 0, 0}}) == ErrorCode::NonFiniteComponent);
  CHECK(validate_pose(Pose{{0, std::numeric_limits<double>::infinity(), 0}, {1, 0, 0, 0}}) ==
        ErrorCode::NonFiniteComponent);
  // Within the 1e-6 norm tolerance.
  CHECK_FALSE(validate_pose(Pose{{0, 0, 0}, {1.0 + 5e-7, 0, 0, 0}}).has_value());
  CHECK(validate_pose(Pose{{0, 0, 0}, {1.0 + 2e-6, 0, 0, 0}}) == ErrorCode::NonUnitQuaternion);
  CHECK(code_of([] { require_valid_pose(Pose{{0, 0, 0}, {0, 0, 0, 0}}); }) ==
        ErrorCode::NonUnitQuaternion);
}

TEST_CASE("fold_events examples") {
  const auto P1 = pose_at(1);
  const auto P2 = pose_at(2);
  const auto P3 = pose_at(3);
  const auto P4 = pose_at(4);

  SUBCASE("empty log") {
    const auto layout = fold_events(std::vector<InteractionEvent>{});
    CHECK(layout.placements.empty());
    CHECK(layout.as_of_seq == 0);
  }
  SUBCASE("update replaces add") {
    std::vector<InteractionEvent> log{event(1, "w1", EventKind::Add, P1),
                                      event(2, "w1", EventKind::Update, P2)};
    const auto layout = fold_events(log);
    CHECK(layout.as_of_seq == 2);
    REQUIRE(layout.placements.size() == 1);
    CHECK(layout.placements.at("w1") == P2);
    // Replay one event at a time.
    Layout stepwise;
    for (const auto& e : log) apply_event(stepwise, e);
    CHECK(stepwise == layout);
    CHECK(layout.placements == oracle_layout(log, 2));
  }
  SUBCASE("independent widgets") {
    std::vector<InteractionEvent> log{event(1, "w1", EventKind::Add, P1),
                                      event(2, "w2", EventKind::Add, P3),
                                      event(3, "w2", EventKind::Update, P4)};
    const auto layout = fold_events(log);
    CHECK(layout.placements == std::map<WidgetId, Pose>{{"w1", P1}, {"w2", P4}});
    CHECK(layout.placements == oracle_layout(log, 3));
  }
}

TEST_CASE("fold_events errors") {
  const auto P = pose_at(0);
  CHECK(code_of([&] {
          fold_events(std::vector<InteractionEvent>{event(1, "w1", EventKind::Update, P)});
        }) == ErrorCode::UpdateBeforeAdd);
  CHECK(code_of([&] {
          fold_events(std::vector<InteractionEvent>{event(1, "w1", EventKind::Add, P),
                                                    event(3, "w1", EventKind::Update, P)});
        }) == ErrorCode::NonMonotonicSeq);
  CHECK(code_of([&] {
          fold_events(std::vector<InteractionEvent>{event(2, "w1", EventKind::Add, P)});
        }) == ErrorCode::NonMonotonicSeq);
  CHECK(code_of([&] {
          fold_events(std::vector<InteractionEvent>{event(1, "w1", EventKind::Add, P),
                                                    event(1, "w1", EventKind::Add, P)});
        }) == ErrorCode::NonMonotonicSeq);
  CHECK(code_of([&] {
          fold_events(std::vector<InteractionEvent>{
              event(1, "w1", EventKind::Add, P),
              event(2, "w2", EventKind::Add, P, scenario("P02"))});
        }) == ErrorCode::ScenarioMismatch);
}

TEST_CASE("fold properties over random logs") {
  std::mt19937_64 rng(7);
  const auto key = scenario();
  for (int round = 0; round < 200; ++round) {
    const auto log = random_log(rng, key, 1 + rng() % 12, rng() % 15);
    const auto full = fold_events(log);

    // Deterministic.
    CHECK(fold_events(log) == full);
    // Agrees with the brute-force oracle at every prefix.
    for (Seq k = 0; k <= log.size(); ++k) {
      std::vector<InteractionEvent> prefix(log.begin(), log.begin() + static_cast<long>(k));
      const auto partial = fold_events(key, prefix);
      CHECK(partial.placements == oracle_layout(log, k));
      CHECK(partial.as_of_seq == k);

      // Incremental consistency: fold(prefix) + suffix == fold(all).
      auto resumed = partial;
      apply_events(resumed, std::span(log).subspan(k));
      CHECK(resumed == full);
    }
    // A duplicated trailing event is rejected and changes nothing.
    auto replayed = full;
    CHECK_FALSE(apply_event(replayed, log.back()));
    CHECK(replayed == full);
  }
}

TEST_CASE("apply_event detects gaps") {
  Layout layout;
  layout.scenario = scenario();
  CHECK(apply_event(layout, event(1, "w1", EventKind::Add, pose_at(0))));
  CHECK(code_of([&] { apply_event(layout, event(3, "w1", EventKind::Update, pose_at(1))); }) ==
        ErrorCode::NonMonotonicSeq);
  CHECK(layout.as_of_seq == 1);
}

TEST_CASE("classify_crop") {
  CHECK(classify_crop({0, 0, 1, 1}) == CropClass::Whole);
  CHECK(classify_crop({0.1, 0.2, 0.9, 0.8}) == CropClass::Cropped);
  CHECK(classify_crop({0, 0, 1, 1 - 1e-7}) == CropClass::Whole);
  CHECK(classify_crop({0, 0, 1, 1 - 2e-6}) == CropClass::Cropped);
  CHECK(classify_crop({1e-6, 0, 1, 1}) == CropClass::Whole);

  // Every valid crop lands in exactly one class.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    CropRegion crop{std::min(a, b), std::min(c, d), std::max(a, b), std::max(c, d)};
    if (!crop.valid()) continue;
    const auto cls = classify_crop(crop);
    CHECK((cls == CropClass::Whole) != (cls == CropClass::Cropped));
  }
  CHECK(code_of([] { require_valid_crop({0.5, 0, 0.5, 1}); }) == ErrorCode::InvalidCrop);
  CHECK(code_of([] { require_valid_crop({0, 0, 1.5, 1}); }) == ErrorCode::InvalidCrop);
}

TEST_CASE("scenario keys") {
  const auto key = ScenarioKey::parse("P01/living room/relax");
  REQUIRE(key);
  CHECK(key->environment == "living room");
  CHECK(key->to_string() == "P01/living room/relax");
  CHECK_FALSE(ScenarioKey::parse("P01/office"));
  CHECK_FALSE(ScenarioKey::parse("P01//work"));
  CHECK_FALSE(ScenarioKey::parse("a/b/c/d"));
  CHECK(scenario("P01") != scenario("P02"));
}

TEST_CASE("category list") {
  const auto& list = CategoryList::app_store();
  CHECK(list.labels().size() == 27);
  CHECK(list.contains("Productivity"));
  CHECK(list.contains("Food & Drink"));
  CHECK_FALSE(list.contains("NotACategory"));
  CHECK_FALSE(list.contains("productivity"));
}

TEST_CASE("label normalization") {
  CHECK(normalize_label("  App   Icon ") == "app icon");
  CHECK(normalize_label("App\ticon") == "app icon");
  CHECK(normalize_label("") == "");
  CHECK(icontains("Email Inbox", "inbox"));
  CHECK_FALSE(icontains("Email", "inbox"));
  CHECK(istarts_with("Emoji", "em"));
}

TEST_CASE("json round trips") {
  Annotation a;
  a.widget_id = "w1";
  a.app_name = "Mail";
  a.functionality = "email inbox";
  a.ui_types = {UiType::InformationalComponent, UiType::InputControl};
  a.category = "Productivity";
  a.cluster_id = "c1";
  a.activity_type = ActivityType::Peripheral;
  a.version = 3;
  CHECK(annotation_from_json(to_json(a)) == a);

  Layout layout;
  layout.scenario = scenario();
  layout.as_of_seq = 4;
  layout.placements["w1"] = pose_at_yaw(0.5, 1.25, -2.0, 0.3);
  CHECK(layout_from_json(Json::parse(to_json(layout).dump())) == layout);

  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(1.0 / 3.0) == "0.333333333");
  CHECK(round_sig9(1.0 / 3.0) == doctest::Approx(0.333333333).epsilon(1e-12));
  CHECK(code_of([] { pose_from_json(Json{{"px", 1}}); }) == ErrorCode::InvalidArgument);
}
