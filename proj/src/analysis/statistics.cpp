#include "layoutminer/analysis/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "layoutminer/core/crop.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/core/text.hpp"

namespace layoutminer {

std::optional<SdKind> parse_sd_kind(std::string_view text) noexcept {
  if (text == "population") return SdKind::Population;
  if (text == "sample") return SdKind::Sample;
  return std::nullopt;
}

std::string_view to_string(SdKind kind) noexcept {
  return kind == SdKind::Population ? "population" : "sample";
}

Summary summarize(std::span<const double> values, SdKind sd) {
  Summary s;
  s.n = values.size();
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = values.front();
  s.max = values.front();
  for (const double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = sum / static_cast<double>(s.n);
  double squares = 0.0;
  for (const double v : values) squares += (v - s.mean) * (v - s.mean);
  const auto denom = sd == SdKind::Sample ? s.n - 1 : s.n;
  s.sd = denom == 0 ? 0.0 : std::sqrt(squares / static_cast<double>(denom));
  return s;
}

Distribution Distribution::from_counts(const std::map<std::string, std::uint64_t>& counts) {
  Distribution d;
  for (const auto& [label, count] : counts) d.total += count;
  for (const auto& [label, count] : counts) {
    d.entries[label] =
        Share{count, d.total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(d.total)};
  }
  return d;
}

Json to_json(const Summary& s) {
  return {{"n", s.n},
          {"mean", round_sig9(s.mean)},
          {"sd", round_sig9(s.sd)},
          {"min", round_sig9(s.min)},
          {"max", round_sig9(s.max)}};
}

Json to_json(const Distribution& d) {
  Json entries = Json::object();
  for (const auto& [label, share] : d.entries) {
    entries[label] = {{"count", share.count}, {"fraction", round_sig9(share.fraction)}};
  }
  return {{"total", d.total}, {"entries", std::move(entries)}};
}

Distribution category_distribution(const Dataset& dataset,
                                   const std::optional<std::string>& environment) {
  return category_distribution(dataset, dataset.placements_in(environment));
}

Distribution ui_type_distribution(const Dataset& dataset,
                                  const std::optional<std::string>& environment) {
  return ui_type_distribution(dataset, dataset.placements_in(environment));
}

Distribution category_distribution(const Dataset& dataset,
                                   const std::vector<const Placement*>& placements) {
  require_annotated(dataset, placements);
  std::map<std::string, std::uint64_t> counts;
  for (const auto* p : placements) ++counts[dataset.annotation(p->widget_id)->category];
  return Distribution::from_counts(counts);
}

Distribution ui_type_distribution(const Dataset& dataset,
                                  const std::vector<const Placement*>& placements) {
  require_annotated(dataset, placements);
  std::map<std::string, std::uint64_t> counts;
  for (const auto* p : placements) {
    for (const auto type : dataset.annotation(p->widget_id)->ui_types) {
      ++counts[std::string(to_string(type))];
    }
  }
  return Distribution::from_counts(counts);
}

RankedLabels top_functionalities(const Dataset& dataset,
                                 const std::optional<std::string>& environment, std::size_t k) {
  std::map<std::string, std::uint64_t> counts;
  for (const auto* p : dataset.placements_in(environment)) {
    const auto* a = dataset.annotation(p->widget_id);
    if (!a) continue;
    auto label = normalize_label(a->functionality);
    if (!label.empty()) ++counts[std::move(label)];
  }
  RankedLabels ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > k) ranked.resize(k);
  return ranked;
}

CropStats crop_statistics(const Dataset& dataset) {
  CropStats s;
  for (const auto& p : dataset.placements()) {
    const auto* w = dataset.widget(p.widget_id);
    if (!w) throw Error(ErrorCode::DanglingReference, "unknown widget " + p.widget_id);
    if (classify_crop(w->crop) == CropClass::Cropped) {
      ++s.cropped;
    } else {
      ++s.whole;
    }
  }
  const auto total = static_cast<double>(s.cropped + s.whole);
  if (total > 0) {
    s.fraction_cropped = static_cast<double>(s.cropped) / total;
    s.fraction_whole = static_cast<double>(s.whole) / total;
  }
  return s;
}

std::optional<TaskNature> parse_task_nature(std::string_view text) noexcept {
  const auto lower = to_lower(trim(text));
  if (lower == "static") return TaskNature::Static;
  if (lower == "dynamic") return TaskNature::Dynamic;
  return std::nullopt;
}

std::string_view to_string(TaskNature nature) noexcept {
  return nature == TaskNature::Static ? "static" : "dynamic";
}

TaskLabels task_labels_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidArgument, "task labels must be a JSON object");
  TaskLabels labels;
  for (const auto& [task, value] : j.items()) {
    const auto nature = value.is_string() ? parse_task_nature(value.get<std::string>()) : std::nullopt;
    if (!nature) {
      throw Error(ErrorCode::InvalidArgument, "task '" + task + "' must be static or dynamic");
    }
    labels[task] = *nature;
  }
  return labels;
}

StaticDynamicSplit static_dynamic_distribution(const Dataset& dataset, const TaskLabels& labels) {
  std::set<std::string> unlabeled;
  for (const auto& [key, layout] : dataset.layouts()) {
    if (!labels.contains(key.task)) unlabeled.insert(key.task);
  }
  if (!unlabeled.empty()) {
    std::string list;
    for (const auto& task : unlabeled) list += (list.empty() ? "" : ", ") + task;
    throw Error(ErrorCode::UnlabeledTask, "tasks without a static/dynamic label: " + list);
  }
  const auto placements = dataset.placements_in(std::nullopt);
  require_annotated(dataset, placements);
  std::map<std::string, std::uint64_t> static_counts;
  std::map<std::string, std::uint64_t> dynamic_counts;
  std::map<std::string, std::map<std::string, std::uint64_t>> per_category;
  for (const auto* p : placements) {
    const auto& category = dataset.annotation(p->widget_id)->category;
    const auto nature = labels.at(p->scenario.task);
    ++(nature == TaskNature::Static ? static_counts : dynamic_counts)[category];
    ++per_category[category][std::string(to_string(nature))];
  }
  StaticDynamicSplit split;
  split.static_side = Distribution::from_counts(static_counts);
  split.dynamic_side = Distribution::from_counts(dynamic_counts);
  for (const auto& [category, counts] : per_category) {
    split.per_category[category] = Distribution::from_counts(counts);
  }
  return split;
}

namespace {

Summary summarize_counts(const std::map<std::string, std::size_t>& counts, SdKind sd) {
  std::vector<double> values;
  for (const auto& [key, n] : counts) values.push_back(static_cast<double>(n));
  return summarize(values, sd);
}

}  // namespace

ScreenshotStats screenshot_statistics(const Dataset& dataset, SdKind sd) {
  ScreenshotStats stats;
  std::map<std::string, std::size_t> per_participant;
  for (const auto& [id, shot] : dataset.snapshot().screenshots) ++per_participant[shot.participant_id];
  stats.total = dataset.snapshot().screenshots.size();
  stats.overall = summarize_counts(per_participant, sd);

  // group -> participant -> screenshots
  std::map<std::string, std::map<std::string, std::set<ScreenshotId>>> by_env;
  std::map<std::string, std::map<std::string, std::set<ScreenshotId>>> by_task;
  for (const auto& p : dataset.placements()) {
    const auto* w = dataset.widget(p.widget_id);
    const auto* shot = w ? dataset.screenshot(w->screenshot_id) : nullptr;
    if (!shot) continue;
    by_env[p.scenario.environment][shot->participant_id].insert(shot->id);
    by_task[p.scenario.task][shot->participant_id].insert(shot->id);
  }
  const auto fill = [sd](const auto& groups, std::map<std::string, Summary>& out) {
    for (const auto& [group, participants] : groups) {
      std::map<std::string, std::size_t> counts;
      for (const auto& [participant, shots] : participants) counts[participant] = shots.size();
      out[group] = summarize_counts(counts, sd);
    }
  };
  fill(by_env, stats.by_environment);
  fill(by_task, stats.by_task);
  return stats;
}

WidgetsPerScenario widgets_per_scenario(const Dataset& dataset, SdKind sd) {
  WidgetsPerScenario out;
  std::map<std::string, std::size_t> per_participant;
  std::vector<double> per_layout;
  std::map<EnvironmentTask, std::vector<double>> grouped;
  for (const auto& [key, layout] : dataset.layouts()) {
    const auto n = layout.placements.size();
    out.total_widgets += n;
    out.by_scenario[key] = n;
    per_participant[key.participant_id] += n;
    per_layout.push_back(static_cast<double>(n));
    grouped[EnvironmentTask{key.environment, key.task}].push_back(static_cast<double>(n));
  }
  out.per_participant = summarize_counts(per_participant, sd);
  out.per_layout = summarize(per_layout, sd);
  for (const auto& [group, values] : grouped) out.by_environment_task[group] = summarize(values, sd);
  return out;
}

DatasetCounts dataset_counts(const Dataset& dataset) {
  DatasetCounts c;
  c.placements = dataset.placements().size();
  c.layouts = dataset.layouts().size();
  c.participants = dataset.participants().size();
  c.screenshots = dataset.snapshot().screenshots.size();
  std::set<WidgetId> widgets;
  std::set<std::string> apps;
  for (const auto& p : dataset.placements()) {
    widgets.insert(p.widget_id);
    std::string app;
    if (const auto* a = dataset.annotation(p.widget_id)) {
      ++c.annotated_placements;
      app = normalize_label(a->app_name);
    }
    if (app.empty()) {
      const auto* w = dataset.widget(p.widget_id);
      const auto* shot = w ? dataset.screenshot(w->screenshot_id) : nullptr;
      if (shot && shot->app_hint) app = normalize_label(*shot->app_hint);
    }
    if (!app.empty()) apps.insert(std::move(app));
  }
  c.distinct_widgets = widgets.size();
  c.unique_apps = apps.size();
  return c;
}

}  // namespace layoutminer
