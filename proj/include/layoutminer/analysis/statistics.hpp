#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "layoutminer/analysis/dataset.hpp"
#include "layoutminer/core/json_io.hpp"

namespace layoutminer {

enum class SdKind { Population, Sample };
std::optional<SdKind> parse_sd_kind(std::string_view text) noexcept;
std::string_view to_string(SdKind kind) noexcept;

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;
  double min = 0.0;
  double max = 0.0;

  bool operator==(const Summary&) const = default;
};

// All zeros for empty input; sample SD of a single value is 0.
Summary summarize(std::span<const double> values, SdKind sd = SdKind::Population);

struct Share {
  std::uint64_t count = 0;
  double fraction = 0.0;

  bool operator==(const Share&) const = default;
};

struct Distribution {
  std::map<std::string, Share> entries;
  std::uint64_t total = 0;

  static Distribution from_counts(const std::map<std::string, std::uint64_t>& counts);
  bool operator==(const Distribution&) const = default;
};

Json to_json(const Summary& summary);
Json to_json(const Distribution& distribution);

// Category counts over placements, optionally restricted to one environment.
Distribution category_distribution(const Dataset& dataset,
                                   const std::optional<std::string>& environment = std::nullopt);

// Counts (placement, ui type) assignments: a widget with k types adds k.
Distribution ui_type_distribution(const Dataset& dataset,
                                  const std::optional<std::string>& environment = std::nullopt);

// The same counts over an explicit set of placements, all of which must be
// annotated.
Distribution category_distribution(const Dataset& dataset, const std::vector<const Placement*>& placements);
Distribution ui_type_distribution(const Dataset& dataset, const std::vector<const Placement*>& placements);

using RankedLabels = std::vector<std::pair<std::string, std::uint64_t>>;

// Normalized functionality labels by descending count, ties by label.
// Placements without an annotation or with an empty functionality are skipped.
RankedLabels top_functionalities(const Dataset& dataset,
                                 const std::optional<std::string>& environment, std::size_t k);

struct CropStats {
  std::uint64_t cropped = 0;
  std::uint64_t whole = 0;
  double fraction_cropped = 0.0;
  double fraction_whole = 0.0;
};

CropStats crop_statistics(const Dataset& dataset);

enum class TaskNature { Static, Dynamic };
std::optional<TaskNature> parse_task_nature(std::string_view text) noexcept;
std::string_view to_string(TaskNature nature) noexcept;

using TaskLabels = std::map<std::string, TaskNature>;
// {"<task>": "static" | "dynamic", ...}
TaskLabels task_labels_from_json(const Json& j);

struct StaticDynamicSplit {
  Distribution static_side;
  Distribution dynamic_side;
  // Per category: a distribution over {"static", "dynamic"}.
  std::map<std::string, Distribution> per_category;
};

StaticDynamicSplit static_dynamic_distribution(const Dataset& dataset, const TaskLabels& labels);

// Screenshots per participant. A screenshot belongs to an environment or task
// when a widget cropped from it is placed in a matching scenario; each group
// only counts participants with at least one screenshot in it.
struct ScreenshotStats {
  std::size_t total = 0;
  Summary overall;
  std::map<std::string, Summary> by_environment;
  std::map<std::string, Summary> by_task;
};

ScreenshotStats screenshot_statistics(const Dataset& dataset, SdKind sd = SdKind::Population);

struct EnvironmentTask {
  std::string environment;
  std::string task;

  auto operator<=>(const EnvironmentTask&) const = default;
};

struct WidgetsPerScenario {
  std::size_t total_widgets = 0;
  Summary per_participant;
  Summary per_layout;
  std::map<ScenarioKey, std::size_t> by_scenario;
  // Widgets per layout, grouped by environment and task.
  std::map<EnvironmentTask, Summary> by_environment_task;
};

WidgetsPerScenario widgets_per_scenario(const Dataset& dataset, SdKind sd = SdKind::Population);

struct DatasetCounts {
  std::size_t placements = 0;
  std::size_t distinct_widgets = 0;
  std::size_t layouts = 0;
  std::size_t participants = 0;
  std::size_t screenshots = 0;
  std::size_t unique_apps = 0;
  std::size_t annotated_placements = 0;
};

// unique_apps counts distinct normalized app names of placed widgets, taken
// from the annotation or, failing that, the screenshot's app hint.
DatasetCounts dataset_counts(const Dataset& dataset);

}  // namespace layoutminer
