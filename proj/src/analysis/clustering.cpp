#include "layoutminer/analysis/clustering.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/pose.hpp"

namespace layoutminer {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  // The smaller index stays the root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::optional<ActivityType> majority_activity(const Dataset& dataset,
                                              const std::set<WidgetId>& members) {
  std::array<std::size_t, 3> votes{};
  for (const auto& id : members) {
    const auto* a = dataset.annotation(id);
    if (a && a->activity_type) ++votes[static_cast<std::size_t>(*a->activity_type)];
  }
  const auto best = std::max_element(votes.begin(), votes.end());
  if (*best == 0) return std::nullopt;
  return kAllActivityTypes[static_cast<std::size_t>(best - votes.begin())];
}

bool lower_first_member(const Cluster& a, const Cluster& b) {
  return *a.widget_ids.begin() < *b.widget_ids.begin();
}

}  // namespace

std::vector<Cluster> cluster_layout(const Layout& layout, double threshold_m) {
  if (!std::isfinite(threshold_m) || threshold_m <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "cluster threshold must be a positive distance");
  }
  std::vector<const WidgetId*> ids;
  std::vector<Vec3> positions;
  for (const auto& [id, pose] : layout.placements) {
    ids.push_back(&id);
    positions.push_back(pose.position);
  }
  DisjointSets sets(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (distance(positions[i], positions[j]) <= threshold_m) sets.unite(i, j);
    }
  }
  // Roots are the lowest index of each component, and ids are sorted, so
  // visiting in index order yields clusters ordered by lowest member id.
  std::vector<Cluster> clusters;
  std::map<std::size_t, std::size_t> cluster_of_root;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto root = sets.find(i);
    auto [it, inserted] = cluster_of_root.try_emplace(root, clusters.size());
    if (inserted) {
      Cluster c;
      c.id = "c" + std::to_string(clusters.size() + 1);
      c.scenario = layout.scenario;
      clusters.push_back(std::move(c));
    }
    clusters[it->second].widget_ids.insert(*ids[i]);
  }
  return clusters;
}

std::vector<Cluster> dataset_clusters(const Dataset& dataset, const ClusterSource& source) {
  std::vector<Cluster> out;
  if (source.computed) {
    for (const auto& [key, layout] : dataset.layouts()) {
      for (auto& c : cluster_layout(layout, source.threshold_m)) {
        c.activity_type = majority_activity(dataset, c.widget_ids);
        out.push_back(std::move(c));
      }
    }
    if (out.empty()) throw Error(ErrorCode::NoClusters, "no placed widgets to cluster");
    return out;
  }

  bool any_cluster_id = false;
  for (const auto& [key, layout] : dataset.layouts()) {
    std::map<std::string, Cluster> named;
    std::vector<Cluster> scenario_clusters;
    for (const auto& [widget_id, pose] : layout.placements) {
      const auto* a = dataset.annotation(widget_id);
      if (a && a->cluster_id) {
        any_cluster_id = true;
        auto& c = named[*a->cluster_id];
        c.id = *a->cluster_id;
        c.scenario = key;
        c.widget_ids.insert(widget_id);
      } else {
        Cluster c;
        c.id = "single:" + widget_id;
        c.scenario = key;
        c.widget_ids.insert(widget_id);
        scenario_clusters.push_back(std::move(c));
      }
    }
    for (auto& [id, c] : named) scenario_clusters.push_back(std::move(c));
    std::sort(scenario_clusters.begin(), scenario_clusters.end(), lower_first_member);
    for (auto& c : scenario_clusters) {
      c.activity_type = majority_activity(dataset, c.widget_ids);
      out.push_back(std::move(c));
    }
  }
  if (!any_cluster_id) {
    throw Error(ErrorCode::NoClusters, "no placed widget carries a cluster annotation");
  }
  return out;
}

ClusterStats cluster_statistics(const Dataset& dataset, const ClusterSource& source, SdKind sd) {
  const auto clusters = dataset_clusters(dataset, source);
  ClusterStats stats;
  stats.total_clusters = clusters.size();
  std::map<ParticipantId, double> per_participant;
  std::map<ScenarioKey, double> per_scenario;
  std::vector<double> sizes;
  std::size_t singles = 0, pairs = 0, larger = 0, over_five = 0;
  for (const auto& c : clusters) {
    const auto size = c.widget_ids.size();
    per_participant[c.scenario.participant_id] += 1;
    per_scenario[c.scenario] += 1;
    sizes.push_back(static_cast<double>(size));
    ++stats.size_histogram[size];
    stats.total_widgets += size;
    if (size == 1) singles += size;
    if (size == 2) pairs += size;
    if (size >= 3) larger += size;
    if (size > 5) over_five += size;
  }
  std::vector<double> pp, ps;
  for (const auto& [k, v] : per_participant) pp.push_back(v);
  for (const auto& [k, v] : per_scenario) ps.push_back(v);
  stats.per_participant = summarize(pp, sd);
  stats.per_scenario = summarize(ps, sd);
  stats.widgets_per_cluster = summarize(sizes, sd);
  const auto total = static_cast<double>(stats.total_widgets);
  stats.fraction_singleton = static_cast<double>(singles) / total;
  stats.fraction_pairs = static_cast<double>(pairs) / total;
  stats.fraction_3plus = static_cast<double>(larger) / total;
  stats.fraction_gt5 = static_cast<double>(over_five) / total;
  return stats;
}

std::string cluster_size_bucket(std::size_t size) {
  if (size <= 2) return std::to_string(size);
  if (size <= 5) return "3-5";
  return "6+";
}

ActivityBreakdown activity_breakdown(const Dataset& dataset, const ClusterSource& source) {
  const auto clusters = dataset_clusters(dataset, source);
  std::vector<std::string> missing;
  std::map<std::string, std::uint64_t> overall;
  std::map<std::string, std::map<std::string, std::uint64_t>> by_size;
  for (const auto& c : clusters) {
    if (!c.activity_type) {
      missing.push_back(c.scenario.to_string() + ":" + c.id);
      continue;
    }
    const std::string label(to_string(*c.activity_type));
    ++overall[label];
    ++by_size[cluster_size_bucket(c.widget_ids.size())][label];
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i) list += (i ? ", " : "") + missing[i];
    if (missing.size() > 20) list += ", ...";
    throw Error(ErrorCode::MissingActivityType,
                std::to_string(missing.size()) + " cluster(s) lack an activity type: " + list);
  }
  ActivityBreakdown out;
  out.overall = Distribution::from_counts(overall);
  for (const auto& [bucket, counts] : by_size) out.by_size[bucket] = Distribution::from_counts(counts);
  return out;
}

}  // namespace layoutminer
