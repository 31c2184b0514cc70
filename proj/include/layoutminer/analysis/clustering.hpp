#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "layoutminer/analysis/dataset.hpp"
#include "layoutminer/analysis/statistics.hpp"

namespace layoutminer {

inline constexpr double kDefaultClusterThresholdM = 0.75;

// Single-linkage clustering of a layout's widget positions: two widgets share
// a cluster iff a chain of pairwise distances <= threshold_m connects them.
// Clusters are ordered by lowest member widget id and named c1, c2, ...
// Error(InvalidArgument) unless threshold_m is finite and > 0.
std::vector<Cluster> cluster_layout(const Layout& layout, double threshold_m);

// Annotated clusters come from annotation cluster ids, grouped per scenario;
// placed widgets without a cluster id form singleton clusters. Computed
// clusters run cluster_layout over every layout.
struct ClusterSource {
  bool computed = false;
  double threshold_m = kDefaultClusterThresholdM;

  static ClusterSource annotated() { return {}; }
  static ClusterSource computed_with(double threshold_m) { return {true, threshold_m}; }
};

// Clusters across the dataset, ordered by scenario then cluster order. A
// cluster's activity type is the majority over its members' annotations
// (ties: Primary, Peripheral, Ambient). Error(NoClusters) for an annotated
// source when no annotation carries a cluster id.
std::vector<Cluster> dataset_clusters(const Dataset& dataset, const ClusterSource& source);

struct ClusterStats {
  std::size_t total_clusters = 0;
  std::size_t total_widgets = 0;
  Summary per_participant;
  Summary per_scenario;
  Summary widgets_per_cluster;
  std::map<std::size_t, std::size_t> size_histogram;
  // Fractions of widgets by the size of their cluster.
  double fraction_singleton = 0.0;
  double fraction_pairs = 0.0;
  double fraction_3plus = 0.0;
  double fraction_gt5 = 0.0;
};

ClusterStats cluster_statistics(const Dataset& dataset, const ClusterSource& source,
                                SdKind sd = SdKind::Population);

// "1", "2", "3-5" or "6+".
std::string cluster_size_bucket(std::size_t size);

struct ActivityBreakdown {
  Distribution overall;
  std::map<std::string, Distribution> by_size;
};

// Fractions over clusters. Error(MissingActivityType) lists clusters without
// an activity type.
ActivityBreakdown activity_breakdown(const Dataset& dataset,
                                     const ClusterSource& source = ClusterSource::annotated());

}  // namespace layoutminer
