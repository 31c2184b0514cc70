#include "layoutminer/store/event_store.hpp"

#include "append_file.hpp"
#include "layoutminer/core/crop.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/core/pose.hpp"
#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace fs = std::filesystem;

struct EventStore::ScenarioLog {
  ScenarioKey key;
  mutable std::mutex mutex;
  mutable std::condition_variable changed;
  std::vector<InteractionEvent> events;
  std::set<WidgetId> added;
  std::vector<PoseSample> samples;
  detail::AppendFile event_file;
  detail::AppendFile pose_file;
};

namespace {

bool parses_as_json(std::string_view line) { return Json::accept(line); }

std::string line_of(const Json& j) { return j.dump() + "\n"; }

std::string scenario_file_stem(const ScenarioKey& key) {
  return sha256_hex(to_json(key).dump()).substr(0, 32);
}

[[noreturn]] void corrupt(const fs::path& path, std::size_t line, const std::string& why) {
  throw Error(ErrorCode::StoreCorrupt,
              path.string() + ":" + std::to_string(line) + ": " + why);
}

Screenshot normalized(Screenshot s) {
  if (s.app_hint && s.app_hint->empty()) s.app_hint.reset();
  return s;
}

void require_valid_scenario(const ScenarioKey& scenario) {
  if (!scenario.valid()) {
    throw Error(ErrorCode::InvalidScenario, "participant, environment and task must be non-empty");
  }
}

void require_timestamp(TimestampMs at) {
  if (at < 0) throw Error(ErrorCode::InvalidArgument, "timestamps must be non-negative");
}

}  // namespace

std::unique_ptr<EventStore> EventStore::open(const fs::path& dir, StoreOptions options) {
  std::unique_ptr<EventStore> store(new EventStore(dir, std::move(options)));
  store->load();
  return store;
}

std::unique_ptr<EventStore> EventStore::in_memory(StoreOptions options) {
  return std::unique_ptr<EventStore>(new EventStore(std::nullopt, std::move(options)));
}

EventStore::EventStore(std::optional<fs::path> root, StoreOptions options)
    : root_(std::move(root)),
      options_(std::move(options)),
      blobs_(root_ ? std::optional<fs::path>(*root_ / "blobs") : std::nullopt,
             options_.sync_writes, options_.blob_capacity_bytes) {}

EventStore::~EventStore() = default;

void EventStore::load() {
  fs::create_directories(*root_ / "scenarios");
  const auto records_path = *root_ / "records.jsonl";
  const auto lines = detail::read_journal_lines(records_path, parses_as_json);
  std::vector<ScenarioKey> scenarios;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    Json j = Json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("type")) {
      corrupt(records_path, i + 1, "unreadable record");
    }
    try {
      const auto type = j.at("type").get<std::string>();
      if (type == "scenario") {
        scenarios.push_back(scenario_from_json(j.at("scenario")));
      } else if (type == "screenshot") {
        auto s = screenshot_from_json(j);
        screenshots_[s.id] = s;
      } else if (type == "widget") {
        auto w = widget_from_json(j);
        if (!widgets_.contains(w.id)) widgets_by_screenshot_.emplace(w.screenshot_id, w.id);
        widgets_[w.id] = w;
      } else if (type == "annotation") {
        auto a = annotation_from_json(j);
        annotations_[a.widget_id] = a;
      } else {
        corrupt(records_path, i + 1, "unknown record type " + type);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::StoreCorrupt) throw;
      corrupt(records_path, i + 1, e.what());
    } catch (const nlohmann::json::exception& e) {
      corrupt(records_path, i + 1, e.what());
    }
  }
  journal_ = std::make_unique<detail::AppendFile>(records_path, options_.sync_writes);
  for (const auto& key : scenarios) register_scenario(key, false);
}

void EventStore::append_record(std::string_view line) {
  if (journal_) journal_->append(line);
}

EventStore::ScenarioLog* EventStore::find_log(const ScenarioKey& scenario) const {
  std::shared_lock lock(scenarios_mutex_);
  auto it = logs_.find(scenario);
  return it == logs_.end() ? nullptr : it->second.get();
}

EventStore::ScenarioLog& EventStore::register_scenario(const ScenarioKey& scenario,
                                                       bool write_record) {
  if (auto* log = find_log(scenario)) return *log;
  std::unique_lock records(records_mutex_);
  std::unique_lock lock(scenarios_mutex_);
  if (auto it = logs_.find(scenario); it != logs_.end()) return *it->second;

  auto log = std::make_unique<ScenarioLog>();
  log->key = scenario;
  if (write_record) append_record(line_of(Json{{"type", "scenario"}, {"scenario", to_json(scenario)}}));

  if (root_) {
    const auto stem = *root_ / "scenarios" / scenario_file_stem(scenario);
    auto events_path = stem;
    events_path += ".events";
    auto poses_path = stem;
    poses_path += ".poses";

    const auto event_lines = detail::read_journal_lines(events_path, parses_as_json);
    for (std::size_t i = 0; i < event_lines.size(); ++i) {
      try {
        const auto j = Json::parse(event_lines[i]);
        if (scenario_from_json(j.at("scenario")) != scenario) {
          corrupt(events_path, i + 1, "event belongs to another scenario");
        }
        auto event = event_from_json(j, scenario);
        if (event.seq != log->events.size() + 1) corrupt(events_path, i + 1, "seq gap");
        if (event.kind == EventKind::Update && !log->added.contains(event.widget_id)) {
          corrupt(events_path, i + 1, "update before add");
        }
        log->added.insert(event.widget_id);
        log->events.push_back(std::move(event));
      } catch (const nlohmann::json::exception& e) {
        corrupt(events_path, i + 1, e.what());
      } catch (const Error& e) {
        if (e.code() == ErrorCode::StoreCorrupt) throw;
        corrupt(events_path, i + 1, e.what());
      }
    }
    const auto pose_lines = detail::read_journal_lines(poses_path, parses_as_json);
    for (std::size_t i = 0; i < pose_lines.size(); ++i) {
      try {
        const auto j = Json::parse(pose_lines[i]);
        PoseSample sample{scenario, pose_from_json(j.at("pose")), j.at("at_ms").get<TimestampMs>()};
        if (!log->samples.empty() && sample.at < log->samples.back().at) {
          corrupt(poses_path, i + 1, "timestamp regression");
        }
        log->samples.push_back(std::move(sample));
      } catch (const nlohmann::json::exception& e) {
        corrupt(poses_path, i + 1, e.what());
      } catch (const Error& e) {
        if (e.code() == ErrorCode::StoreCorrupt) throw;
        corrupt(poses_path, i + 1, e.what());
      }
    }
    log->event_file = detail::AppendFile(events_path, options_.sync_writes);
    log->pose_file = detail::AppendFile(poses_path, options_.sync_writes);
  }
  auto& ref = *log;
  logs_.emplace(scenario, std::move(log));
  return ref;
}

TimestampMs EventStore::now() const {
  if (options_.clock) return options_.clock();
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

BlobHash EventStore::put_blob(std::string_view bytes) { return blobs_.put(bytes); }

std::optional<std::string> EventStore::get_blob(const BlobHash& hash) const {
  return blobs_.get(hash);
}

bool EventStore::has_blob(const BlobHash& hash) const { return blobs_.contains(hash); }

PutOutcome EventStore::put_scenario(const ScenarioKey& scenario) {
  require_valid_scenario(scenario);
  if (find_log(scenario)) return PutOutcome::Unchanged;
  register_scenario(scenario, true);
  return PutOutcome::Created;
}

bool EventStore::has_scenario(const ScenarioKey& scenario) const {
  return find_log(scenario) != nullptr;
}

std::vector<ScenarioKey> EventStore::scenarios() const {
  std::shared_lock lock(scenarios_mutex_);
  std::vector<ScenarioKey> out;
  out.reserve(logs_.size());
  for (const auto& [key, log] : logs_) out.push_back(key);
  return out;
}

PutOutcome EventStore::put_screenshot(const Screenshot& input) {
  const auto s = normalized(input);
  if (s.id.empty() || s.participant_id.empty()) {
    throw Error(ErrorCode::InvalidArgument, "screenshot id and participant_id are required");
  }
  require_timestamp(s.captured_at);
  if (!blobs_.contains(s.image_ref)) {
    throw Error(ErrorCode::DanglingReference, "screenshot " + s.id + " references missing blob " +
                                                  s.image_ref);
  }
  std::unique_lock lock(records_mutex_);
  if (auto it = screenshots_.find(s.id); it != screenshots_.end()) {
    if (it->second == s) return PutOutcome::Unchanged;
    throw Error(ErrorCode::DuplicateId, "screenshot " + s.id + " already exists with other content");
  }
  auto j = to_json(s);
  j["type"] = "screenshot";
  append_record(line_of(j));
  screenshots_.emplace(s.id, s);
  return PutOutcome::Created;
}

PutOutcome EventStore::put_widget(const Widget& w) {
  if (w.id.empty()) throw Error(ErrorCode::InvalidArgument, "widget id is required");
  require_valid_crop(w.crop);
  require_timestamp(w.created_at);
  if (!blobs_.contains(w.image_ref)) {
    throw Error(ErrorCode::DanglingReference, "widget " + w.id + " references missing blob " +
                                                  w.image_ref);
  }
  std::unique_lock lock(records_mutex_);
  if (!screenshots_.contains(w.screenshot_id)) {
    throw Error(ErrorCode::DanglingReference, "widget " + w.id + " references missing screenshot " +
                                                  w.screenshot_id);
  }
  if (auto it = widgets_.find(w.id); it != widgets_.end()) {
    if (it->second == w) return PutOutcome::Unchanged;
    throw Error(ErrorCode::DuplicateId, "widget " + w.id + " already exists with other content");
  }
  auto j = to_json(w);
  j["type"] = "widget";
  append_record(line_of(j));
  widgets_.emplace(w.id, w);
  widgets_by_screenshot_.emplace(w.screenshot_id, w.id);
  return PutOutcome::Created;
}

std::optional<Screenshot> EventStore::screenshot(const ScreenshotId& id) const {
  std::shared_lock lock(records_mutex_);
  auto it = screenshots_.find(id);
  if (it == screenshots_.end()) return std::nullopt;
  return it->second;
}

std::optional<Widget> EventStore::widget(const WidgetId& id) const {
  std::shared_lock lock(records_mutex_);
  auto it = widgets_.find(id);
  if (it == widgets_.end()) return std::nullopt;
  return it->second;
}

std::vector<Widget> EventStore::list_widgets(const ScreenshotId& screenshot_id) const {
  std::shared_lock lock(records_mutex_);
  std::vector<Widget> out;
  auto [first, last] = widgets_by_screenshot_.equal_range(screenshot_id);
  for (auto it = first; it != last; ++it) out.push_back(widgets_.at(it->second));
  std::sort(out.begin(), out.end(), [](const Widget& a, const Widget& b) { return a.id < b.id; });
  return out;
}

void EventStore::append_event_locked(ScenarioLog& log, const InteractionEvent& event) {
  if (log.event_file.is_open()) {
    auto j = to_json(event);
    j["scenario"] = to_json(event.scenario);
    log.event_file.append(line_of(j));
  }
  log.added.insert(event.widget_id);
  log.events.push_back(event);
  log.changed.notify_all();
}

Seq EventStore::append_event(const ScenarioKey& scenario, const WidgetId& widget_id,
                             EventKind kind, const Pose& pose, std::optional<TimestampMs> at) {
  require_valid_scenario(scenario);
  require_valid_pose(pose);
  if (at) require_timestamp(*at);
  {
    std::shared_lock lock(records_mutex_);
    if (!widgets_.contains(widget_id)) {
      throw Error(ErrorCode::UnknownWidget, "unknown widget " + widget_id);
    }
  }
  auto& log = register_scenario(scenario, true);
  std::lock_guard lock(log.mutex);
  if (kind == EventKind::Update && !log.added.contains(widget_id)) {
    throw Error(ErrorCode::UpdateBeforeAdd,
                "widget " + widget_id + " has no add in " + scenario.to_string());
  }
  InteractionEvent event{log.events.size() + 1, scenario, widget_id, kind, pose,
                         at.value_or(now())};
  append_event_locked(log, event);
  return event.seq;
}

namespace {
ChangeBatch slice(const std::vector<InteractionEvent>& events, Seq since) {
  ChangeBatch batch;
  batch.max_seq = events.size();
  if (since < events.size()) {
    batch.events.assign(events.begin() + static_cast<std::ptrdiff_t>(since), events.end());
  }
  return batch;
}
}  // namespace

ChangeBatch EventStore::get_changes(const ScenarioKey& scenario, Seq since_seq) const {
  auto* log = find_log(scenario);
  if (!log) throw Error(ErrorCode::UnknownScenario, "unknown scenario " + scenario.to_string());
  std::lock_guard lock(log->mutex);
  return slice(log->events, since_seq);
}

ChangeBatch EventStore::wait_for_changes(const ScenarioKey& scenario, Seq since_seq,
                                         std::chrono::milliseconds budget) const {
  auto* log = find_log(scenario);
  if (!log) throw Error(ErrorCode::UnknownScenario, "unknown scenario " + scenario.to_string());
  std::unique_lock lock(log->mutex);
  if (budget.count() > 0) {
    log->changed.wait_for(lock, budget, [&] { return log->events.size() > since_seq; });
  }
  return slice(log->events, since_seq);
}

std::vector<InteractionEvent> EventStore::events(const ScenarioKey& scenario) const {
  return get_changes(scenario, 0).events;
}

void EventStore::append_pose_sample(const PoseSample& sample) {
  require_valid_scenario(sample.scenario);
  require_valid_pose(sample.pose);
  require_timestamp(sample.at);
  auto& log = register_scenario(sample.scenario, true);
  std::lock_guard lock(log.mutex);
  if (!log.samples.empty() && sample.at < log.samples.back().at) {
    throw Error(ErrorCode::TimestampRegression,
                "pose sample at " + std::to_string(sample.at) + " precedes " +
                    std::to_string(log.samples.back().at));
  }
  if (log.pose_file.is_open()) {
    log.pose_file.append(line_of(Json{{"pose", to_json(sample.pose)}, {"at_ms", sample.at}}));
  }
  log.samples.push_back(sample);
}

std::vector<PoseSample> EventStore::pose_samples(const ScenarioKey& scenario) const {
  auto* log = find_log(scenario);
  if (!log) throw Error(ErrorCode::UnknownScenario, "unknown scenario " + scenario.to_string());
  std::lock_guard lock(log->mutex);
  return log->samples;
}

std::uint64_t EventStore::upsert_annotation(const Annotation& annotation,
                                            std::uint64_t expected_version) {
  std::unique_lock lock(records_mutex_);
  if (!widgets_.contains(annotation.widget_id)) {
    throw Error(ErrorCode::UnknownWidget, "unknown widget " + annotation.widget_id);
  }
  const auto it = annotations_.find(annotation.widget_id);
  const std::uint64_t current = it == annotations_.end() ? 0 : it->second.version;
  if (current != expected_version) {
    throw Error(ErrorCode::VersionConflict, "widget " + annotation.widget_id + " is at version " +
                                                std::to_string(current) + ", expected " +
                                                std::to_string(expected_version));
  }
  Annotation stored = annotation;
  stored.version = current + 1;
  auto j = to_json(stored);
  j["type"] = "annotation";
  append_record(line_of(j));
  annotations_[stored.widget_id] = std::move(stored);
  return current + 1;
}

std::optional<Annotation> EventStore::annotation(const WidgetId& widget_id) const {
  std::shared_lock lock(records_mutex_);
  auto it = annotations_.find(widget_id);
  if (it == annotations_.end()) return std::nullopt;
  return it->second;
}

PutOutcome EventStore::import_event(const InteractionEvent& event) {
  require_valid_scenario(event.scenario);
  require_valid_pose(event.pose);
  require_timestamp(event.at);
  if (event.seq == 0) throw Error(ErrorCode::NonMonotonicSeq, "seq must start at 1");
  {
    std::shared_lock lock(records_mutex_);
    if (!widgets_.contains(event.widget_id)) {
      throw Error(ErrorCode::DanglingReference, "event references unknown widget " + event.widget_id);
    }
  }
  auto& log = register_scenario(event.scenario, true);
  std::lock_guard lock(log.mutex);
  if (event.seq <= log.events.size()) {
    if (log.events[event.seq - 1] == event) return PutOutcome::Unchanged;
    throw Error(ErrorCode::DuplicateId, "seq " + std::to_string(event.seq) + " of " +
                                            event.scenario.to_string() + " differs from stored event");
  }
  if (event.seq != log.events.size() + 1) {
    throw Error(ErrorCode::NonMonotonicSeq, "seq " + std::to_string(event.seq) + " leaves a gap in " +
                                                event.scenario.to_string());
  }
  if (event.kind == EventKind::Update && !log.added.contains(event.widget_id)) {
    throw Error(ErrorCode::UpdateBeforeAdd, "widget " + event.widget_id + " has no add in " +
                                                event.scenario.to_string());
  }
  append_event_locked(log, event);
  return PutOutcome::Created;
}

PutOutcome EventStore::import_annotation(const Annotation& annotation) {
  std::unique_lock lock(records_mutex_);
  if (!widgets_.contains(annotation.widget_id)) {
    throw Error(ErrorCode::DanglingReference,
                "annotation references unknown widget " + annotation.widget_id);
  }
  if (auto it = annotations_.find(annotation.widget_id); it != annotations_.end()) {
    if (it->second == annotation) return PutOutcome::Unchanged;
    throw Error(ErrorCode::DuplicateId,
                "annotation of " + annotation.widget_id + " differs from stored annotation");
  }
  auto j = to_json(annotation);
  j["type"] = "annotation";
  append_record(line_of(j));
  annotations_[annotation.widget_id] = annotation;
  return PutOutcome::Created;
}

DatasetSnapshot EventStore::snapshot() const {
  DatasetSnapshot snap;
  std::shared_lock records(records_mutex_);
  snap.screenshots = screenshots_;
  snap.widgets = widgets_;
  snap.annotations = annotations_;
  {
    std::shared_lock lock(scenarios_mutex_);
    for (const auto& [key, log] : logs_) {
      std::lock_guard log_lock(log->mutex);
      snap.events[key] = log->events;
      if (!log->samples.empty()) snap.pose_samples[key] = log->samples;
    }
  }
  snap.blobs = blobs_.list();
  return snap;
}

}  // namespace layoutminer
