#pragma once

// Random analysis fixtures and brute-force counting oracles. The oracles work
// straight off the store snapshot and share no code with the analysis module.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "layoutminer/store/event_store.hpp"
#include "support.hpp"

namespace lm_test {

struct OraclePlacement {
  ScenarioKey scenario;
  WidgetId widget_id;
  Pose pose;
};

inline const std::vector<std::string>& fixture_environments() {
  static const std::vector<std::string> v{"office", "kitchen", "living room", "coffee shop"};
  return v;
}

inline const std::vector<std::string>& fixture_tasks() {
  static const std::vector<std::string> v{"work", "cook", "relax", "chat", "read"};
  return v;
}

// Builds a random dataset of at most `max_widgets` widgets: screenshots per
// participant, whole and cropped widgets, scenarios with add/update logs that
// reuse widgets, and full annotations with noisy functionality labels.
inline void build_random_dataset(EventStore& store, std::mt19937_64& rng, std::size_t max_widgets) {
  static const std::vector<std::string> categories{"Productivity", "Social Networking", "Utilities",
                                                   "Entertainment", "Food & Drink", "Music"};
  static const std::vector<std::string> functionalities{"App icon", "  app   ICON ", "Email inbox",
                                                        "email  inbox", "Clock", "Recipe steps",
                                                        "Music player", "Chat"};
  static const std::vector<std::string> apps{"Mail", "Slack", "Spotify", "  mail ", "Clock", "Recipes"};
  const auto pick = [&](const auto& v) -> const auto& { return v[rng() % v.size()]; };

  const std::size_t participants = 1 + rng() % 4;
  std::vector<ScreenshotId> shots;
  for (std::size_t p = 0; p < participants; ++p) {
    const auto pid = "P0" + std::to_string(p + 1);
    const std::size_t count = 1 + rng() % 4;
    for (std::size_t s = 0; s < count; ++s) {
      const auto id = pid + "-s" + std::to_string(s);
      const auto image = store.put_blob("shot:" + id);
      std::optional<std::string> hint;
      if (rng() % 2) hint = pick(apps);
      store.put_screenshot(Screenshot{id, pid, image, hint, static_cast<TimestampMs>(1000 + s), false});
      shots.push_back(id);
    }
  }
  const std::size_t widget_count = 1 + rng() % max_widgets;
  std::vector<WidgetId> widgets;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < widget_count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "w%03zu", i);
    const WidgetId id = buf;
    CropRegion crop{0, 0, 1, 1};
    if (rng() % 2) {
      const double x0 = unit(rng) * 0.5, y0 = unit(rng) * 0.5;
      crop = CropRegion{x0, y0, x0 + 0.1 + unit(rng) * 0.4, y0 + 0.1 + unit(rng) * 0.4};
    }
    const auto image = store.put_blob("widget:" + id);
    store.put_widget(Widget{id, pick(shots), crop, image, static_cast<TimestampMs>(2000 + i)});
    widgets.push_back(id);

    Annotation a;
    a.widget_id = id;
    a.app_name = rng() % 5 ? pick(apps) : "";
    a.functionality = rng() % 8 ? pick(functionalities) : "";
    a.category = pick(categories);
    for (const auto type : kAllUiTypes) {
      if (rng() % 2) a.ui_types.insert(type);
    }
    if (a.ui_types.empty()) a.ui_types.insert(kAllUiTypes[rng() % 3]);
    if (rng() % 3) a.cluster_id = "g" + std::to_string(rng() % 3);
    a.activity_type = kAllActivityTypes[rng() % 3];
    store.upsert_annotation(a, 0);
  }
  // Every widget is placed at least once; some are reused elsewhere.
  std::vector<ScenarioKey> keys;
  const std::size_t scenario_count = 1 + rng() % 6;
  for (std::size_t s = 0; s < scenario_count; ++s) {
    keys.push_back(scenario("P0" + std::to_string(1 + rng() % participants), pick(fixture_environments()),
                            pick(fixture_tasks())));
  }
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  std::map<ScenarioKey, std::set<WidgetId>> added;
  const auto place = [&](const ScenarioKey& key, const WidgetId& id) {
    const bool update = added[key].contains(id);
    store.append_event(key, id, update ? EventKind::Update : EventKind::Add,
                       pose_at_yaw(coord(rng), coord(rng), coord(rng), coord(rng)));
    added[key].insert(id);
  };
  for (const auto& id : widgets) place(pick(keys), id);
  for (std::size_t extra = rng() % (widget_count + 1); extra > 0; --extra) place(pick(keys), pick(widgets));
}

inline std::vector<OraclePlacement> oracle_placements(const DatasetSnapshot& snap) {
  std::vector<OraclePlacement> out;
  for (const auto& [key, log] : snap.events) {
    for (const auto& [id, pose] : oracle_layout(log, log.size())) out.push_back({key, id, pose});
  }
  return out;
}

inline std::string oracle_normalize(const std::string& text) {
  std::istringstream words(text);
  std::string word, out;
  while (words >> word) {
    for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out += (out.empty() ? "" : " ") + word;
  }
  return out;
}

inline bool oracle_whole(const CropRegion& c) {
  return std::abs(c.x0) <= 1e-6 && std::abs(c.y0) <= 1e-6 && std::abs(c.x1 - 1) <= 1e-6 &&
         std::abs(c.y1 - 1) <= 1e-6;
}

// Connected components by breadth-first flood fill over the full distance graph.
inline std::set<std::set<WidgetId>> oracle_components(const std::map<WidgetId, Pose>& layout,
                                                      double threshold) {
  std::set<std::set<WidgetId>> out;
  std::set<WidgetId> seen;
  for (const auto& [start, start_pose] : layout) {
    if (seen.contains(start)) continue;
    std::set<WidgetId> component;
    std::deque<WidgetId> queue{start};
    seen.insert(start);
    while (!queue.empty()) {
      const auto id = queue.front();
      queue.pop_front();
      component.insert(id);
      const auto& p = layout.at(id).position;
      for (const auto& [other, pose] : layout) {
        if (seen.contains(other)) continue;
        const auto& q = pose.position;
        const double d = std::sqrt((p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y) +
                                   (p.z - q.z) * (p.z - q.z));
        if (d <= threshold) {
          seen.insert(other);
          queue.push_back(other);
        }
      }
    }
    out.insert(component);
  }
  return out;
}

struct OracleMoments {
  double mean = 0;
  double sd = 0;
  double min = 0;
  double max = 0;
};

inline OracleMoments oracle_moments(const std::vector<double>& v, bool sample = false) {
  OracleMoments m;
  if (v.empty()) return m;
  m.min = *std::min_element(v.begin(), v.end());
  m.max = *std::max_element(v.begin(), v.end());
  double sum = 0;
  for (const double x : v) sum += x;
  m.mean = sum / static_cast<double>(v.size());
  double sq = 0;
  for (const double x : v) sq += (x - m.mean) * (x - m.mean);
  const double n = static_cast<double>(v.size()) - (sample ? 1.0 : 0.0);
  m.sd = n > 0 ? std::sqrt(sq / n) : 0.0;
  return m;
}

}  // namespace lm_test
