#include "layoutminer/analysis/report.hpp"

#include <functional>

#include "layoutminer/core/error.hpp"
#include "layoutminer/store/csv.hpp"

namespace layoutminer {

namespace {

using Table = std::vector<csv::Row>;

std::string render(const Table& rows) {
  std::string out;
  for (const auto& row : rows) out += csv::format_row(row);
  return out;
}

std::string num(double value) { return format_real(value); }
std::string num(std::uint64_t value) { return std::to_string(value); }

Json real(double value) { return round_sig9(value); }

csv::Row summary_cells(const Summary& s) {
  return {num(std::uint64_t{s.n}), num(s.mean), num(s.sd), num(s.min), num(s.max)};
}

void append_distribution(Table& rows, const std::string& scope, const Distribution& d) {
  for (const auto& [label, share] : d.entries) {
    rows.push_back({scope, label, num(share.count), num(share.fraction)});
  }
}

// Distribution reports: one overall distribution, plus one per environment
// when no environment filter is given.
Report distribution_report(const Dataset& dataset, const ReportOptions& options,
                           const std::function<Distribution(const std::optional<std::string>&)>& fn) {
  Report r;
  Table rows{{"environment", "label", "count", "fraction"}};
  const auto overall = fn(options.environment);
  r.json["environment"] = options.environment ? Json(*options.environment) : Json(nullptr);
  r.json["distribution"] = to_json(overall);
  append_distribution(rows, options.environment.value_or(""), overall);
  if (!options.environment) {
    Json by_env = Json::object();
    for (const auto& env : dataset.environments()) {
      const auto d = fn(env);
      by_env[env] = to_json(d);
      append_distribution(rows, env, d);
    }
    r.json["by_environment"] = std::move(by_env);
  }
  r.csv = render(rows);
  return r;
}

Report summary_report(const Dataset& dataset, const ReportOptions& options) {
  const auto c = dataset_counts(dataset);
  Report r;
  r.json = {{"widgets", c.placements},
            {"distinct_widgets", c.distinct_widgets},
            {"layouts", c.layouts},
            {"participants", c.participants},
            {"screenshots", c.screenshots},
            {"unique_apps", c.unique_apps},
            {"annotated_widgets", c.annotated_placements}};
  std::optional<std::size_t> clusters;
  try {
    clusters = dataset_clusters(dataset, options.clusters).size();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoClusters) throw;
  }
  r.json["clusters"] = clusters ? Json(*clusters) : Json(nullptr);
  Table rows{{"metric", "value"}};
  for (const auto& [key, value] : r.json.items()) {
    rows.push_back({key, value.is_null() ? "" : value.dump()});
  }
  r.csv = render(rows);
  return r;
}

Report clusters_report(const Dataset& dataset, const ReportOptions& options) {
  const auto s = cluster_statistics(dataset, options.clusters, options.sd);
  Report r;
  r.json["source"] = options.clusters.computed ? "computed" : "annotated";
  if (options.clusters.computed) r.json["threshold_m"] = real(options.clusters.threshold_m);
  r.json["sd"] = to_string(options.sd);
  r.json["total_clusters"] = s.total_clusters;
  r.json["total_widgets"] = s.total_widgets;
  r.json["clusters_per_participant"] = to_json(s.per_participant);
  r.json["clusters_per_scenario"] = to_json(s.per_scenario);
  r.json["widgets_per_cluster"] = to_json(s.widgets_per_cluster);
  Json histogram = Json::object();
  for (const auto& [size, count] : s.size_histogram) histogram[std::to_string(size)] = count;
  r.json["size_histogram"] = std::move(histogram);
  r.json["fraction_singleton"] = real(s.fraction_singleton);
  r.json["fraction_pairs"] = real(s.fraction_pairs);
  r.json["fraction_3plus"] = real(s.fraction_3plus);
  r.json["fraction_gt5"] = real(s.fraction_gt5);

  Table rows{{"metric", "n", "mean", "sd", "min", "max"}};
  const auto summary_row = [&](const std::string& name, const Summary& summary) {
    csv::Row row{name};
    for (auto& cell : summary_cells(summary)) row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  };
  summary_row("clusters_per_participant", s.per_participant);
  summary_row("clusters_per_scenario", s.per_scenario);
  summary_row("widgets_per_cluster", s.widgets_per_cluster);
  const auto value_row = [&](const std::string& name, const std::string& value) {
    rows.push_back({name, "", value, "", "", ""});
  };
  value_row("total_clusters", num(std::uint64_t{s.total_clusters}));
  value_row("total_widgets", num(std::uint64_t{s.total_widgets}));
  for (const auto& [size, count] : s.size_histogram) {
    value_row("clusters_of_size_" + std::to_string(size), num(std::uint64_t{count}));
  }
  value_row("fraction_singleton", num(s.fraction_singleton));
  value_row("fraction_pairs", num(s.fraction_pairs));
  value_row("fraction_3plus", num(s.fraction_3plus));
  value_row("fraction_gt5", num(s.fraction_gt5));
  r.csv = render(rows);
  return r;
}

Report activity_report(const Dataset& dataset, const ReportOptions& options) {
  const auto a = activity_breakdown(dataset, options.clusters);
  Report r;
  r.json["overall"] = to_json(a.overall);
  Json by_size = Json::object();
  Table rows{{"cluster_size", "activity_type", "count", "fraction"}};
  append_distribution(rows, "all", a.overall);
  for (const auto& bucket : {"1", "2", "3-5", "6+"}) {
    const auto it = a.by_size.find(bucket);
    if (it == a.by_size.end()) continue;
    by_size[bucket] = to_json(it->second);
    append_distribution(rows, bucket, it->second);
  }
  r.json["by_cluster_size"] = std::move(by_size);
  r.csv = render(rows);
  return r;
}

Report functionalities_report(const Dataset& dataset, const ReportOptions& options) {
  Report r;
  Table rows{{"environment", "rank", "functionality", "count"}};
  const auto ranked_json = [&](const std::string& scope, const RankedLabels& ranked) {
    Json list = Json::array();
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      list.push_back({{"functionality", ranked[i].first}, {"count", ranked[i].second}});
      rows.push_back({scope, std::to_string(i + 1), ranked[i].first, num(ranked[i].second)});
    }
    return list;
  };
  r.json["k"] = options.top_k;
  r.json["environment"] = options.environment ? Json(*options.environment) : Json(nullptr);
  r.json["top"] = ranked_json(options.environment.value_or(""),
                              top_functionalities(dataset, options.environment, options.top_k));
  if (!options.environment) {
    Json by_env = Json::object();
    for (const auto& env : dataset.environments()) {
      by_env[env] = ranked_json(env, top_functionalities(dataset, env, options.top_k));
    }
    r.json["by_environment"] = std::move(by_env);
  }
  r.csv = render(rows);
  return r;
}

Report crops_report(const Dataset& dataset, const ReportOptions&) {
  const auto c = crop_statistics(dataset);
  Report r;
  r.json = {{"cropped", {{"count", c.cropped}, {"fraction", real(c.fraction_cropped)}}},
            {"whole", {{"count", c.whole}, {"fraction", real(c.fraction_whole)}}}};
  r.csv = render({{"class", "count", "fraction"},
                  {"cropped", num(c.cropped), num(c.fraction_cropped)},
                  {"whole", num(c.whole), num(c.fraction_whole)}});
  return r;
}

Report static_dynamic_report(const Dataset& dataset, const ReportOptions& options) {
  if (!options.task_labels) {
    throw Error(ErrorCode::UnlabeledTask, "static-dynamic needs task labels (--task-labels)");
  }
  const auto s = static_dynamic_distribution(dataset, *options.task_labels);
  Report r;
  r.json["static"] = to_json(s.static_side);
  r.json["dynamic"] = to_json(s.dynamic_side);
  Json per_category = Json::object();
  Table rows{{"category", "static_count", "dynamic_count", "static_fraction", "dynamic_fraction"}};
  for (const auto& [category, d] : s.per_category) {
    per_category[category] = to_json(d);
    const auto share = [&](const char* side) {
      const auto it = d.entries.find(side);
      return it == d.entries.end() ? Share{} : it->second;
    };
    const auto st = share("static");
    const auto dy = share("dynamic");
    rows.push_back({category, num(st.count), num(dy.count), num(st.fraction), num(dy.fraction)});
  }
  r.json["per_category"] = std::move(per_category);
  r.csv = render(rows);
  return r;
}

Report screenshots_report(const Dataset& dataset, const ReportOptions& options) {
  const auto s = screenshot_statistics(dataset, options.sd);
  Report r;
  r.json["total"] = s.total;
  r.json["sd"] = to_string(options.sd);
  r.json["per_participant"] = to_json(s.overall);
  Table rows{{"group", "name", "participants", "mean", "sd", "min", "max"}};
  const auto add_row = [&](const std::string& group, const std::string& name, const Summary& summary) {
    csv::Row row{group, name};
    for (auto& cell : summary_cells(summary)) row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  };
  add_row("all", "", s.overall);
  Json by_env = Json::object();
  for (const auto& [env, summary] : s.by_environment) {
    by_env[env] = to_json(summary);
    add_row("environment", env, summary);
  }
  Json by_task = Json::object();
  for (const auto& [task, summary] : s.by_task) {
    by_task[task] = to_json(summary);
    add_row("task", task, summary);
  }
  r.json["by_environment"] = std::move(by_env);
  r.json["by_task"] = std::move(by_task);
  r.csv = render(rows);
  return r;
}

Report widgets_per_scenario_report(const Dataset& dataset, const ReportOptions& options) {
  const auto w = widgets_per_scenario(dataset, options.sd);
  Report r;
  r.json["total_widgets"] = w.total_widgets;
  r.json["sd"] = to_string(options.sd);
  r.json["per_participant"] = to_json(w.per_participant);
  r.json["per_layout"] = to_json(w.per_layout);
  Json scenarios = Json::array();
  Table rows{{"scope", "participant_id", "environment", "task", "n", "mean", "sd", "min", "max"}};
  const auto add_row = [&](const std::string& scope, const std::string& p, const std::string& env,
                           const std::string& task, const Summary& summary) {
    csv::Row row{scope, p, env, task};
    for (auto& cell : summary_cells(summary)) row.push_back(std::move(cell));
    rows.push_back(std::move(row));
  };
  add_row("participant", "", "", "", w.per_participant);
  add_row("layout", "", "", "", w.per_layout);
  for (const auto& [key, count] : w.by_scenario) {
    Json entry = to_json(key);
    entry["widgets"] = count;
    scenarios.push_back(std::move(entry));
    const auto n = static_cast<double>(count);
    add_row("scenario", key.participant_id, key.environment, key.task, Summary{1, n, 0.0, n, n});
  }
  Json groups = Json::array();
  for (const auto& [group, summary] : w.by_environment_task) {
    Json entry{{"environment", group.environment}, {"task", group.task}};
    entry["widgets_per_layout"] = to_json(summary);
    groups.push_back(std::move(entry));
    add_row("environment_task", "", group.environment, group.task, summary);
  }
  r.json["by_scenario"] = std::move(scenarios);
  r.json["by_environment_task"] = std::move(groups);
  r.csv = render(rows);
  return r;
}

using Builder = Report (*)(const Dataset&, const ReportOptions&);

const std::vector<std::pair<std::string, Builder>>& builders() {
  static const std::vector<std::pair<std::string, Builder>> table{
      {"summary", summary_report},
      {"categories",
       [](const Dataset& d, const ReportOptions& o) {
         return distribution_report(d, o, [&](const auto& env) { return category_distribution(d, env); });
       }},
      {"ui-types",
       [](const Dataset& d, const ReportOptions& o) {
         return distribution_report(d, o, [&](const auto& env) { return ui_type_distribution(d, env); });
       }},
      {"clusters", clusters_report},
      {"activity", activity_report},
      {"functionalities", functionalities_report},
      {"crops", crops_report},
      {"static-dynamic", static_dynamic_report},
      {"screenshots", screenshots_report},
      {"widgets-per-scenario", widgets_per_scenario_report},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& report_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : builders()) out.push_back(name);
    return out;
  }();
  return names;
}

Report build_report(const Dataset& dataset, std::string_view name, const ReportOptions& options) {
  for (const auto& [candidate, fn] : builders()) {
    if (candidate != name) continue;
    if (dataset.empty()) throw Error(ErrorCode::NoData, "no data");
    return fn(dataset, options);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown report '" + std::string(name) + "'");
}

}  // namespace layoutminer
