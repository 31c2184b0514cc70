#pragma once

// Test-only helpers: scratch directories, fixture builders and brute-force
// oracles. Oracles here deliberately avoid the library's fold/apply code.

#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"

namespace lm_test {

using namespace layoutminer;

class TempDir {
 public:
  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path_ = std::filesystem::temp_directory_path() /
            ("layoutminer-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Pose pose_at(double x, double y = 0.0, double z = 0.0) {
  return Pose{{x, y, z}, {1.0, 0.0, 0.0, 0.0}};
}

// Unit quaternion from a yaw angle, used to vary orientations.
inline Pose pose_at_yaw(double x, double y, double z, double yaw) {
  return Pose{{x, y, z}, {std::cos(yaw / 2), 0.0, std::sin(yaw / 2), 0.0}};
}

inline ScenarioKey scenario(std::string p = "P01", std::string env = "office",
                            std::string task = "work") {
  return ScenarioKey{std::move(p), std::move(env), std::move(task)};
}

inline InteractionEvent event(Seq seq, const WidgetId& w, EventKind kind, const Pose& pose,
                              const ScenarioKey& key = scenario()) {
  return InteractionEvent{seq, key, w, kind, pose, static_cast<TimestampMs>(seq * 10)};
}

// Brute-force layout oracle: for every widget, scan the whole log for the
// highest-seq event at or below `as_of`.
inline std::map<WidgetId, Pose> oracle_layout(const std::vector<InteractionEvent>& log, Seq as_of) {
  std::map<WidgetId, Pose> out;
  std::map<WidgetId, Seq> best;
  for (const auto& e : log) {
    if (e.seq > as_of) continue;
    auto it = best.find(e.widget_id);
    if (it == best.end() || e.seq > it->second) {
      best[e.widget_id] = e.seq;
      out[e.widget_id] = e.pose;
    }
  }
  return out;
}

// Random valid event log over widgets w000..w{n-1}: adds in random order,
// interleaved with updates of already-added widgets.
inline std::vector<InteractionEvent> random_log(std::mt19937_64& rng, const ScenarioKey& key,
                                                std::size_t widgets, std::size_t updates) {
  std::vector<WidgetId> pending;
  for (std::size_t i = 0; i < widgets; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%03zu", i);
    pending.emplace_back(buf);
  }
  std::shuffle(pending.begin(), pending.end(), rng);
  std::vector<WidgetId> added;
  std::vector<InteractionEvent> log;
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::size_t updates_left = updates;
  while (!pending.empty() || updates_left > 0) {
    const bool do_add = added.empty() || (!pending.empty() && (updates_left == 0 || rng() % 2 == 0));
    InteractionEvent e;
    e.seq = log.size() + 1;
    e.scenario = key;
    e.pose = pose_at_yaw(coord(rng), coord(rng), coord(rng), angle(rng));
    e.at = static_cast<TimestampMs>(e.seq * 100);
    if (do_add) {
      e.kind = EventKind::Add;
      e.widget_id = pending.back();
      pending.pop_back();
      added.push_back(e.widget_id);
    } else {
      e.kind = EventKind::Update;
      e.widget_id = added[rng() % added.size()];
      --updates_left;
    }
    log.push_back(std::move(e));
  }
  return log;
}

// Stores one screenshot and a widget per id, all cropped from it.
inline void seed_widgets(EventStore& store, const std::vector<WidgetId>& ids,
                         const ParticipantId& participant = "P01",
                         const ScreenshotId& screenshot_id = "s1") {
  if (!store.screenshot(screenshot_id)) {
    const auto image = store.put_blob("screenshot-bytes:" + screenshot_id);
    store.put_screenshot(Screenshot{screenshot_id, participant, image, std::nullopt, 1000, false});
  }
  for (const auto& id : ids) {
    const auto image = store.put_blob("widget-bytes:" + id);
    store.put_widget(Widget{id, screenshot_id, CropRegion{0.1, 0.1, 0.6, 0.5}, image, 2000});
  }
}

}  // namespace lm_test
