#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "layoutminer/core/types.hpp"
#include "layoutminer/store/blob_store.hpp"

namespace layoutminer {

namespace detail {
class AppendFile;
}

struct StoreOptions {
  // fdatasync every appended record before acknowledging it.
  bool sync_writes = true;
  std::optional<std::uint64_t> blob_capacity_bytes;
  // Timestamp source for events appended without an explicit time.
  std::function<TimestampMs()> clock;
};

enum class PutOutcome { Created, Unchanged };

struct ChangeBatch {
  std::vector<InteractionEvent> events;
  Seq max_seq = 0;
};

// Immutable copy of everything in a store, taken atomically with respect to
// writers. Scenarios without events still appear in `events`.
struct DatasetSnapshot {
  std::map<ScenarioKey, std::vector<InteractionEvent>> events;
  std::map<ScenarioKey, std::vector<PoseSample>> pose_samples;
  std::map<ScreenshotId, Screenshot> screenshots;
  std::map<WidgetId, Widget> widgets;
  std::map<WidgetId, Annotation> annotations;
  std::vector<BlobHash> blobs;
};

// Durable, append-only store for blobs, records and per-scenario event logs.
//
// On-disk layout under the data directory:
//   blobs/<sha256>            content-addressed blobs
//   records.jsonl             scenarios, screenshots, widgets, annotations
//   scenarios/<key>.events    one JSON line per interaction event
//   scenarios/<key>.poses     one JSON line per participant pose sample
//
// Every record is one newline-terminated line written with a single write().
// Reopening drops a torn trailing line, so each log is always a prefix of
// what was acknowledged plus at most the in-flight record.
//
// Appends to one scenario are serialized; different scenarios proceed in
// parallel. Readers never block each other.
class EventStore {
 public:
  static std::unique_ptr<EventStore> open(const std::filesystem::path& dir,
                                          StoreOptions options = {});
  static std::unique_ptr<EventStore> in_memory(StoreOptions options = {});

  ~EventStore();
  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;

  BlobHash put_blob(std::string_view bytes);
  std::optional<std::string> get_blob(const BlobHash& hash) const;
  bool has_blob(const BlobHash& hash) const;

  PutOutcome put_scenario(const ScenarioKey& scenario);
  bool has_scenario(const ScenarioKey& scenario) const;
  std::vector<ScenarioKey> scenarios() const;

  // Re-putting a byte-identical record is a no-op; a different record under
  // the same id is Error(DuplicateId). Missing references raise
  // Error(DanglingReference).
  PutOutcome put_screenshot(const Screenshot& screenshot);
  PutOutcome put_widget(const Widget& widget);
  std::optional<Screenshot> screenshot(const ScreenshotId& id) const;
  std::optional<Widget> widget(const WidgetId& id) const;
  std::vector<Widget> list_widgets(const ScreenshotId& screenshot_id) const;

  // Appends to the scenario's log (registering the scenario if needed) and
  // returns the assigned seq once the event is durable.
  Seq append_event(const ScenarioKey& scenario, const WidgetId& widget_id, EventKind kind,
                   const Pose& pose, std::optional<TimestampMs> at = std::nullopt);

  // Events with seq > since_seq. Error(UnknownScenario) for unregistered
  // scenarios.
  ChangeBatch get_changes(const ScenarioKey& scenario, Seq since_seq) const;
  // Like get_changes, but blocks up to `budget` while the batch is empty.
  ChangeBatch wait_for_changes(const ScenarioKey& scenario, Seq since_seq,
                               std::chrono::milliseconds budget) const;
  std::vector<InteractionEvent> events(const ScenarioKey& scenario) const;

  void append_pose_sample(const PoseSample& sample);
  std::vector<PoseSample> pose_samples(const ScenarioKey& scenario) const;

  // Optimistic concurrency: succeeds only if the stored version equals
  // expected_version (0 when absent). Returns the new version.
  std::uint64_t upsert_annotation(const Annotation& annotation, std::uint64_t expected_version);
  std::optional<Annotation> annotation(const WidgetId& widget_id) const;

  // Import paths. Both keep caller-supplied seq/version and are idempotent
  // for identical records.
  PutOutcome import_event(const InteractionEvent& event);
  PutOutcome import_annotation(const Annotation& annotation);

  DatasetSnapshot snapshot() const;

  bool persistent() const noexcept { return root_.has_value(); }

 private:
  struct ScenarioLog;

  EventStore(std::optional<std::filesystem::path> root, StoreOptions options);
  void load();
  void append_record(std::string_view line);
  ScenarioLog& log_for(const ScenarioKey& scenario);
  ScenarioLog* find_log(const ScenarioKey& scenario) const;
  ScenarioLog& register_scenario(const ScenarioKey& scenario, bool write_record);
  void append_event_locked(ScenarioLog& log, const InteractionEvent& event);
  TimestampMs now() const;

  std::optional<std::filesystem::path> root_;
  StoreOptions options_;
  BlobStore blobs_;

  // Guards screenshots_, widgets_, annotations_ and the records journal.
  mutable std::shared_mutex records_mutex_;
  std::map<ScreenshotId, Screenshot> screenshots_;
  std::map<WidgetId, Widget> widgets_;
  std::multimap<ScreenshotId, WidgetId> widgets_by_screenshot_;
  std::map<WidgetId, Annotation> annotations_;
  std::unique_ptr<detail::AppendFile> journal_;

  // Guards the scenario map itself; each log has its own lock.
  mutable std::shared_mutex scenarios_mutex_;
  std::map<ScenarioKey, std::unique_ptr<ScenarioLog>> logs_;
};

}  // namespace layoutminer
