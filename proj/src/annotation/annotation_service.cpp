#include "layoutminer/annotation/annotation_service.hpp"

#include <algorithm>
#include <tuple>

#include "layoutminer/analysis/dataset.hpp"
#include "layoutminer/analysis/statistics.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/core/text.hpp"

namespace layoutminer {

namespace {

bool listed(const std::vector<std::string>& list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

const std::string* text_field(const Annotation& a, std::string_view field) {
  if (field == "app_name") return &a.app_name;
  if (field == "screenshot_desc") return &a.screenshot_desc;
  if (field == "widget_desc") return &a.widget_desc;
  if (field == "functionality") return &a.functionality;
  if (field == "excluded_parts") return &a.excluded_parts;
  return nullptr;
}

bool matches_filter(const WidgetRow& row, const std::string& field, const std::set<std::string>& values) {
  if (values.empty()) return true;
  const auto& a = row.annotation;
  if (field == "environment") return values.contains(row.scenario.environment);
  if (field == "task") return values.contains(row.scenario.task);
  if (field == "participant") return values.contains(row.scenario.participant_id);
  if (field == "category") return a && values.contains(a->category);
  if (field == "app_name") return a && values.contains(a->app_name);
  if (field == "ui_type") {
    if (!a) return false;
    for (const auto type : a->ui_types) {
      if (values.contains(std::string(to_string(type)))) return true;
    }
    return false;
  }
  return false;
}

bool matches_text(const WidgetRow& row, const std::string& q) {
  if (q.empty()) return true;
  if (!row.annotation) return false;
  for (const auto& field : annotation_text_fields()) {
    if (icontains(*text_field(*row.annotation, field), q)) return true;
  }
  return false;
}

using SortKey = std::tuple<std::int64_t, std::string>;

SortKey sort_key(const WidgetRow& row, const std::string& field) {
  const auto& a = row.annotation;
  if (field == "widget_id") return {0, row.widget.id};
  if (field == "participant") return {0, row.scenario.participant_id};
  if (field == "environment") return {0, row.scenario.environment};
  if (field == "task") return {0, row.scenario.task};
  if (field == "category") return {0, a ? a->category : ""};
  if (field == "app_name") return {0, a ? a->app_name : ""};
  if (field == "functionality") return {0, a ? a->functionality : ""};
  if (field == "version") return {a ? static_cast<std::int64_t>(a->version) : 0, ""};
  return {row.widget.created_at, ""};
}

}  // namespace

const std::vector<std::string>& query_filter_fields() {
  static const std::vector<std::string> fields{"environment", "task",     "participant",
                                               "category",    "ui_type", "app_name"};
  return fields;
}

const std::vector<std::string>& query_sort_fields() {
  static const std::vector<std::string> fields{"widget_id", "participant",   "environment",
                                               "task",      "category",      "app_name",
                                               "functionality", "version", "created_at"};
  return fields;
}

const std::vector<std::string>& annotation_text_fields() {
  static const std::vector<std::string> fields{"app_name", "screenshot_desc", "widget_desc",
                                               "functionality", "excluded_parts"};
  return fields;
}

WidgetPage AnnotationService::query_widgets(const WidgetQuery& query) const {
  if (!listed(query_sort_fields(), query.sort_field)) {
    throw Error(ErrorCode::InvalidSortField, "cannot sort by '" + query.sort_field + "'");
  }
  for (const auto& [field, values] : query.filters) {
    if (!listed(query_filter_fields(), field)) {
      throw Error(ErrorCode::InvalidFilterField, "cannot filter by '" + field + "'");
    }
  }
  if (query.limit < 1 || query.limit > kMaxPageLimit) {
    throw Error(ErrorCode::InvalidPage, "limit must be between 1 and " + std::to_string(kMaxPageLimit));
  }

  const Dataset dataset(store_.snapshot());
  std::vector<WidgetRow> rows;
  for (const auto& p : dataset.placements()) {
    const auto* widget = dataset.widget(p.widget_id);
    if (!widget) continue;
    WidgetRow row;
    row.scenario = p.scenario;
    row.widget = *widget;
    row.pose = p.pose;
    row.crop_class = classify_crop(widget->crop);
    if (const auto* shot = dataset.screenshot(widget->screenshot_id)) row.app_hint = shot->app_hint;
    if (const auto* a = dataset.annotation(p.widget_id)) row.annotation = *a;
    bool keep = matches_text(row, query.q);
    for (const auto& [field, values] : query.filters) keep = keep && matches_filter(row, field, values);
    if (keep) rows.push_back(std::move(row));
  }

  std::vector<std::pair<SortKey, std::size_t>> order;
  order.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) order.emplace_back(sort_key(rows[i], query.sort_field), i);
  std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return query.descending ? b.first < a.first : a.first < b.first;
    const auto& ra = rows[a.second];
    const auto& rb = rows[b.second];
    return std::tie(ra.widget.id, ra.scenario) < std::tie(rb.widget.id, rb.scenario);
  });

  WidgetPage page;
  page.total_count = rows.size();
  page.offset = query.offset;
  page.limit = query.limit;
  for (std::size_t i = query.offset; i < order.size() && page.rows.size() < query.limit; ++i) {
    page.rows.push_back(std::move(rows[order[i].second]));
  }
  return page;
}

std::uint64_t AnnotationService::upsert_annotation(const WidgetId& widget_id, Annotation annotation,
                                                   std::uint64_t expected_version) {
  if (!store_.widget(widget_id)) throw Error(ErrorCode::UnknownWidget, "unknown widget " + widget_id);
  if (!categories_.contains(annotation.category)) {
    throw Error(ErrorCode::InvalidCategory, "'" + annotation.category + "' is not a known category");
  }
  if (annotation.ui_types.empty()) {
    throw Error(ErrorCode::InvalidArgument, "ui_types must name at least one type");
  }
  annotation.widget_id = widget_id;
  return store_.upsert_annotation(annotation, expected_version);
}

std::vector<Suggestion> AnnotationService::suggest(std::string_view field, std::string_view prefix,
                                                   std::size_t k) const {
  if (!listed(annotation_text_fields(), field)) {
    throw Error(ErrorCode::InvalidField, "no suggestions for '" + std::string(field) + "'");
  }
  std::map<std::string, std::uint64_t> counts;
  for (const auto& [id, a] : store_.snapshot().annotations) {
    const auto& value = *text_field(a, field);
    if (!value.empty() && istarts_with(value, prefix)) ++counts[value];
  }
  std::vector<Suggestion> out;
  for (const auto& [value, count] : counts) out.push_back({value, count});
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.count > b.count; });
  if (out.size() > k) out.resize(k);
  return out;
}

Json AnnotationService::summary() const {
  const Dataset dataset(store_.snapshot());
  const auto counts = dataset_counts(dataset);
  Json out;
  out["counts"] = {{"widgets", counts.placements},
                   {"distinct_widgets", counts.distinct_widgets},
                   {"layouts", counts.layouts},
                   {"participants", counts.participants},
                   {"screenshots", counts.screenshots},
                   {"unique_apps", counts.unique_apps},
                   {"annotated_widgets", counts.annotated_placements},
                   {"unannotated_widgets", counts.placements - counts.annotated_placements}};

  const auto shots = screenshot_statistics(dataset);
  Json by_env = Json::object();
  for (const auto& [env, s] : shots.by_environment) by_env[env] = to_json(s);
  Json by_task = Json::object();
  for (const auto& [task, s] : shots.by_task) by_task[task] = to_json(s);
  out["screenshots"] = {{"total", shots.total},
                        {"per_participant", to_json(shots.overall)},
                        {"by_environment", std::move(by_env)},
                        {"by_task", std::move(by_task)}};

  std::vector<const Placement*> annotated;
  for (const auto& p : dataset.placements()) {
    if (dataset.annotation(p.widget_id)) annotated.push_back(&p);
  }
  if (annotated.empty()) {
    out["categories"] = nullptr;
    out["ui_types"] = nullptr;
  } else {
    out["categories"] = to_json(category_distribution(dataset, annotated));
    out["ui_types"] = to_json(ui_type_distribution(dataset, annotated));
  }

  const auto wps = widgets_per_scenario(dataset);
  out["widgets_per_scenario"] = {{"total_widgets", wps.total_widgets},
                                 {"per_participant", to_json(wps.per_participant)},
                                 {"per_layout", to_json(wps.per_layout)}};
  return out;
}

Json to_json(const WidgetRow& row) {
  return {{"widget_id", row.widget.id},
          {"scenario", to_json(row.scenario)},
          {"screenshot_id", row.widget.screenshot_id},
          {"image_hash", row.widget.image_ref},
          {"crop", to_json(row.widget.crop)},
          {"crop_class", to_string(row.crop_class)},
          {"created_at_ms", row.widget.created_at},
          {"app_hint", row.app_hint ? Json(*row.app_hint) : Json(nullptr)},
          {"pose", to_json(row.pose)},
          {"annotation", row.annotation ? to_json(*row.annotation) : Json(nullptr)}};
}

Json to_json(const WidgetPage& page) {
  Json rows = Json::array();
  for (const auto& row : page.rows) rows.push_back(to_json(row));
  return {{"rows", std::move(rows)},
          {"total_count", page.total_count},
          {"offset", page.offset},
          {"limit", page.limit}};
}

}  // namespace layoutminer
