#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "layoutminer/analysis/clustering.hpp"
#include "layoutminer/analysis/dataset.hpp"
#include "layoutminer/analysis/statistics.hpp"
#include "layoutminer/core/json_io.hpp"

namespace layoutminer {

struct ReportOptions {
  std::optional<std::string> environment;
  ClusterSource clusters;
  SdKind sd = SdKind::Population;
  std::optional<TaskLabels> task_labels;
  std::size_t top_k = 10;
};

struct Report {
  Json json;
  std::string csv;
};

// summary, categories, ui-types, clusters, activity, functionalities, crops,
// static-dynamic, screenshots, widgets-per-scenario
const std::vector<std::string>& report_names();

// Error(NoData) for an empty dataset, Error(InvalidArgument) for an unknown
// report name. Output is deterministic for a given dataset and options.
Report build_report(const Dataset& dataset, std::string_view name, const ReportOptions& options);

}  // namespace layoutminer
