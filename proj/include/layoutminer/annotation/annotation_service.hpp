#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "layoutminer/core/categories.hpp"
#include "layoutminer/core/crop.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/core/types.hpp"
#include "layoutminer/store/event_store.hpp"

namespace layoutminer {

inline constexpr std::size_t kMaxPageLimit = 500;
inline constexpr std::size_t kDefaultPageLimit = 50;

// Filter fields: environment, task, participant, category, ui_type, app_name.
const std::vector<std::string>& query_filter_fields();
// Sort fields: widget_id, participant, environment, task, category, app_name,
// functionality, version, created_at.
const std::vector<std::string>& query_sort_fields();
// Text fields searched by `q` and completed by suggest: app_name,
// screenshot_desc, widget_desc, functionality, excluded_parts.
const std::vector<std::string>& annotation_text_fields();

struct WidgetQuery {
  // Case-insensitive substring of any annotation text field.
  std::string q;
  // A row matches a field when it matches any of the values; all fields must match.
  std::map<std::string, std::set<std::string>> filters;
  std::string sort_field = "widget_id";
  bool descending = false;
  std::size_t offset = 0;
  std::size_t limit = kDefaultPageLimit;
};

// One table row per placement: a widget as placed in one scenario.
struct WidgetRow {
  ScenarioKey scenario;
  Widget widget;
  Pose pose;
  CropClass crop_class = CropClass::Whole;
  std::optional<std::string> app_hint;
  std::optional<Annotation> annotation;
};

struct WidgetPage {
  std::vector<WidgetRow> rows;
  std::size_t total_count = 0;
  std::size_t offset = 0;
  std::size_t limit = 0;
};

struct Suggestion {
  std::string value;
  std::uint64_t count = 0;

  bool operator==(const Suggestion&) const = default;
};

class AnnotationService {
 public:
  explicit AnnotationService(EventStore& store, CategoryList categories = CategoryList::app_store())
      : store_(store), categories_(std::move(categories)) {}

  const CategoryList& categories() const noexcept { return categories_; }

  // Rows ordered by (sort key, widget_id, scenario). Error(InvalidSortField),
  // Error(InvalidFilterField), Error(InvalidPage) for a limit outside [1, 500].
  WidgetPage query_widgets(const WidgetQuery& query) const;

  // Validates and writes the annotation under optimistic concurrency.
  // Error(UnknownWidget), Error(InvalidCategory), Error(InvalidArgument) for
  // empty ui_types, Error(VersionConflict).
  std::uint64_t upsert_annotation(const WidgetId& widget_id, Annotation annotation,
                                  std::uint64_t expected_version);

  // Distinct values of a text field starting with `prefix` (case-insensitive),
  // by descending frequency then value. Error(InvalidField).
  std::vector<Suggestion> suggest(std::string_view field, std::string_view prefix, std::size_t k) const;

  // Dashboard payload: counts, screenshot statistics, category and ui type
  // distributions over annotated placements, widgets per scenario.
  Json summary() const;

 private:
  EventStore& store_;
  CategoryList categories_;
};

Json to_json(const WidgetRow& row);
Json to_json(const WidgetPage& page);

}  // namespace layoutminer
