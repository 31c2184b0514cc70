#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "layoutminer/store/event_store.hpp"

namespace layoutminer {

inline constexpr std::string_view kDatasetSchemaVersion = "layoutminer.dataset/1";

struct DatasetManifest {
  std::string schema_version{kDatasetSchemaVersion};
  std::uint64_t scenarios = 0;
  std::uint64_t screenshots = 0;
  std::uint64_t widgets = 0;
  std::uint64_t events = 0;
  std::uint64_t pose_samples = 0;
  std::uint64_t annotations = 0;
  std::uint64_t blobs = 0;

  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

// Column headers, in file order.
namespace dataset_columns {
inline constexpr std::array<std::string_view, 3> kScenarios{"participant_id", "environment", "task"};
inline constexpr std::array<std::string_view, 6> kScreenshots{
    "screenshot_id", "participant_id", "image_hash", "app_hint", "captured_at_ms", "redacted"};
inline constexpr std::array<std::string_view, 8> kWidgets{
    "widget_id", "screenshot_id", "crop_x0", "crop_y0", "crop_x1", "crop_y1", "image_hash",
    "created_at_ms"};
inline constexpr std::array<std::string_view, 14> kEvents{
    "scenario_participant", "scenario_environment", "scenario_task", "seq", "widget_id", "kind",
    "px", "py", "pz", "qw", "qx", "qy", "qz", "at_ms"};
inline constexpr std::array<std::string_view, 11> kPoseSamples{
    "scenario_participant", "scenario_environment", "scenario_task", "px", "py", "pz", "qw", "qx",
    "qy", "qz", "at_ms"};
inline constexpr std::array<std::string_view, 11> kAnnotations{
    "widget_id", "app_name", "screenshot_desc", "widget_desc", "functionality", "excluded_parts",
    "ui_types", "category", "cluster_id", "activity_type", "version"};
}  // namespace dataset_columns

// Writes scenarios.csv, screenshots.csv, widgets.csv, events.csv,
// pose_samples.csv, annotations.csv, manifest.json and images/<hash>.
// Rows are sorted, so exporting the same content twice gives identical bytes.
DatasetManifest export_dataset(const EventStore& store, const std::filesystem::path& dir);

// Parses and validates the whole directory before writing anything, then
// loads it into `store`. Errors: SchemaMismatch (headers, cell formats,
// manifest counts), MissingBlob, IntegrityError (blob bytes vs name).
DatasetManifest import_dataset(EventStore& store, const std::filesystem::path& dir);

std::string manifest_to_json(const DatasetManifest& manifest);

}  // namespace layoutminer
