#include "layoutminer/store/dataset_io.hpp"

#include <charconv>
#include <cstdlib>
#include <map>

#include "append_file.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"
#include "layoutminer/core/json_io.hpp"
#include "layoutminer/store/csv.hpp"
#include "layoutminer/store/hash.hpp"

namespace layoutminer {

namespace fs = std::filesystem;

namespace {

template <std::size_t N>
csv::Row header(const std::array<std::string_view, N>& columns) {
  return csv::Row(columns.begin(), columns.end());
}

std::string join_ui_types(const std::set<UiType>& types) {
  std::string out;
  for (auto t : types) {
    if (!out.empty()) out.push_back(';');
    out += to_string(t);
  }
  return out;
}

void pose_cells(csv::Row& row, const Pose& pose) {
  for (double v : {pose.position.x, pose.position.y, pose.position.z, pose.orientation.w,
                   pose.orientation.x, pose.orientation.y, pose.orientation.z}) {
    row.push_back(format_real(v));
  }
}

void write_table(const fs::path& path, const csv::Row& head, const std::vector<csv::Row>& rows) {
  std::string out = csv::format_row(head);
  for (const auto& row : rows) out += csv::format_row(row);
  detail::write_file_atomic(path, out, false);
}

// Cursor over one parsed table, producing SchemaMismatch errors that name
// the file and row.
class Table {
 public:
  template <std::size_t N>
  Table(const fs::path& dir, std::string name, const std::array<std::string_view, N>& columns)
      : name_(std::move(name)) {
    const auto path = dir / name_;
    if (!fs::exists(path)) throw Error(ErrorCode::SchemaMismatch, "missing " + name_);
    rows_ = csv::parse(detail::read_file(path));
    if (rows_.empty()) throw Error(ErrorCode::SchemaMismatch, name_ + " has no header row");
    if (rows_.front() != header(columns)) {
      throw Error(ErrorCode::SchemaMismatch, name_ + " header does not match the expected columns");
    }
    rows_.erase(rows_.begin());
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (rows_[i].size() != N) fail(i, "expected " + std::to_string(N) + " cells");
    }
  }

  std::size_t size() const { return rows_.size(); }
  const csv::Row& row(std::size_t i) const { return rows_[i]; }

  [[noreturn]] void fail(std::size_t i, const std::string& why) const {
    throw Error(ErrorCode::SchemaMismatch, name_ + " row " + std::to_string(i + 2) + ": " + why);
  }

  std::int64_t integer(std::size_t i, std::size_t col) const {
    const auto& cell = rows_[i][col];
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) fail(i, "not an integer: '" + cell + "'");
    return value;
  }

  std::int64_t timestamp(std::size_t i, std::size_t col) const {
    auto v = integer(i, col);
    if (v < 0) fail(i, "negative timestamp");
    return v;
  }

  double real(std::size_t i, std::size_t col) const {
    const auto& cell = rows_[i][col];
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) fail(i, "not a number: '" + cell + "'");
    return v;
  }

  Pose pose(std::size_t i, std::size_t first) const {
    Pose p;
    p.position = {real(i, first), real(i, first + 1), real(i, first + 2)};
    p.orientation = {real(i, first + 3), real(i, first + 4), real(i, first + 5), real(i, first + 6)};
    return p;
  }

  ScenarioKey scenario(std::size_t i, std::size_t first) const {
    ScenarioKey key{rows_[i][first], rows_[i][first + 1], rows_[i][first + 2]};
    if (!key.valid()) fail(i, "empty scenario field");
    return key;
  }

 private:
  std::string name_;
  std::vector<csv::Row> rows_;
};

std::uint64_t read_count(const Json& counts, const char* name) {
  auto it = counts.find(name);
  if (it == counts.end() || !it->is_number_unsigned()) {
    throw Error(ErrorCode::SchemaMismatch, std::string("manifest lacks count '") + name + "'");
  }
  return it->get<std::uint64_t>();
}

}  // namespace

std::string manifest_to_json(const DatasetManifest& m) {
  Json j{{"schema_version", m.schema_version},
         {"counts",
          Json{{"scenarios", m.scenarios},
               {"screenshots", m.screenshots},
               {"widgets", m.widgets},
               {"events", m.events},
               {"pose_samples", m.pose_samples},
               {"annotations", m.annotations},
               {"blobs", m.blobs}}}};
  return j.dump(2) + "\n";
}

static DatasetManifest write_tables(const DatasetSnapshot& snap, const fs::path& dir);

DatasetManifest export_dataset(const EventStore& store, const fs::path& dir) {
  const auto snap = store.snapshot();
  fs::create_directories(dir / "images");
  for (const auto& hash : snap.blobs) {
    auto bytes = store.get_blob(hash);
    if (!bytes) throw Error(ErrorCode::MissingBlob, "blob " + hash + " vanished during export");
    detail::write_file_atomic(dir / "images" / hash, *bytes, false);
  }
  return write_tables(snap, dir);
}

static DatasetManifest write_tables(const DatasetSnapshot& snap, const fs::path& dir) {
  namespace cols = dataset_columns;
  fs::create_directories(dir / "images");
  DatasetManifest manifest;

  std::vector<csv::Row> scenarios;
  std::vector<csv::Row> events;
  for (const auto& [key, log] : snap.events) {
    scenarios.push_back({key.participant_id, key.environment, key.task});
    for (const auto& e : log) {
      csv::Row row{key.participant_id, key.environment, key.task, std::to_string(e.seq),
                   e.widget_id, std::string(to_string(e.kind))};
      pose_cells(row, e.pose);
      row.push_back(std::to_string(e.at));
      events.push_back(std::move(row));
    }
  }
  manifest.scenarios = scenarios.size();
  manifest.events = events.size();
  write_table(dir / "scenarios.csv", header(cols::kScenarios), scenarios);
  write_table(dir / "events.csv", header(cols::kEvents), events);

  std::vector<csv::Row> screenshots;
  for (const auto& [id, s] : snap.screenshots) {
    screenshots.push_back({s.id, s.participant_id, s.image_ref, s.app_hint.value_or(""),
                           std::to_string(s.captured_at), s.redacted ? "1" : "0"});
  }
  manifest.screenshots = screenshots.size();
  write_table(dir / "screenshots.csv", header(cols::kScreenshots), screenshots);

  std::vector<csv::Row> widgets;
  for (const auto& [id, w] : snap.widgets) {
    widgets.push_back({w.id, w.screenshot_id, format_real(w.crop.x0), format_real(w.crop.y0),
                       format_real(w.crop.x1), format_real(w.crop.y1), w.image_ref,
                       std::to_string(w.created_at)});
  }
  manifest.widgets = widgets.size();
  write_table(dir / "widgets.csv", header(cols::kWidgets), widgets);

  std::vector<csv::Row> samples;
  for (const auto& [key, trace] : snap.pose_samples) {
    for (const auto& s : trace) {
      csv::Row row{key.participant_id, key.environment, key.task};
      pose_cells(row, s.pose);
      row.push_back(std::to_string(s.at));
      samples.push_back(std::move(row));
    }
  }
  manifest.pose_samples = samples.size();
  write_table(dir / "pose_samples.csv", header(cols::kPoseSamples), samples);

  std::vector<csv::Row> annotations;
  for (const auto& [id, a] : snap.annotations) {
    annotations.push_back({a.widget_id, a.app_name, a.screenshot_desc, a.widget_desc,
                           a.functionality, a.excluded_parts, join_ui_types(a.ui_types), a.category,
                           a.cluster_id.value_or(""),
                           a.activity_type ? std::string(to_string(*a.activity_type)) : "",
                           std::to_string(a.version)});
  }
  manifest.annotations = annotations.size();
  write_table(dir / "annotations.csv", header(cols::kAnnotations), annotations);

  manifest.blobs = snap.blobs.size();
  detail::write_file_atomic(dir / "manifest.json", manifest_to_json(manifest), false);
  return manifest;
}

DatasetManifest import_dataset(EventStore& store, const fs::path& dir) {
  namespace cols = dataset_columns;
  if (!fs::is_directory(dir)) throw Error(ErrorCode::SchemaMismatch, dir.string() + " is not a directory");

  const Table scenario_table(dir, "scenarios.csv", cols::kScenarios);
  const Table screenshot_table(dir, "screenshots.csv", cols::kScreenshots);
  const Table widget_table(dir, "widgets.csv", cols::kWidgets);
  const Table event_table(dir, "events.csv", cols::kEvents);
  const Table sample_table(dir, "pose_samples.csv", cols::kPoseSamples);
  const Table annotation_table(dir, "annotations.csv", cols::kAnnotations);

  DatasetManifest manifest;
  std::vector<ScenarioKey> scenarios;
  for (std::size_t i = 0; i < scenario_table.size(); ++i) {
    scenarios.push_back(scenario_table.scenario(i, 0));
  }

  std::vector<Screenshot> screenshots;
  std::set<ScreenshotId> screenshot_ids;
  for (std::size_t i = 0; i < screenshot_table.size(); ++i) {
    const auto& row = screenshot_table.row(i);
    Screenshot s;
    s.id = row[0];
    s.participant_id = row[1];
    s.image_ref = row[2];
    if (!row[3].empty()) s.app_hint = row[3];
    s.captured_at = screenshot_table.timestamp(i, 4);
    if (row[5] != "0" && row[5] != "1") screenshot_table.fail(i, "redacted must be 0 or 1");
    s.redacted = row[5] == "1";
    if (s.id.empty() || s.participant_id.empty()) screenshot_table.fail(i, "empty id");
    screenshot_ids.insert(s.id);
    screenshots.push_back(std::move(s));
  }

  std::vector<Widget> widgets;
  std::set<WidgetId> widget_ids;
  for (std::size_t i = 0; i < widget_table.size(); ++i) {
    const auto& row = widget_table.row(i);
    Widget w;
    w.id = row[0];
    w.screenshot_id = row[1];
    w.crop = {widget_table.real(i, 2), widget_table.real(i, 3), widget_table.real(i, 4),
              widget_table.real(i, 5)};
    w.image_ref = row[6];
    w.created_at = widget_table.timestamp(i, 7);
    if (w.id.empty()) widget_table.fail(i, "empty widget id");
    if (!w.crop.valid()) widget_table.fail(i, "crop outside [0,1] or empty");
    if (!screenshot_ids.contains(w.screenshot_id) && !store.screenshot(w.screenshot_id)) {
      throw Error(ErrorCode::DanglingReference,
                  "widget " + w.id + " references missing screenshot " + w.screenshot_id);
    }
    widget_ids.insert(w.id);
    widgets.push_back(std::move(w));
  }

  std::map<ScenarioKey, std::vector<InteractionEvent>> events;
  for (std::size_t i = 0; i < event_table.size(); ++i) {
    const auto& row = event_table.row(i);
    InteractionEvent e;
    e.scenario = event_table.scenario(i, 0);
    const auto seq = event_table.integer(i, 3);
    if (seq <= 0) event_table.fail(i, "seq must be positive");
    e.seq = static_cast<Seq>(seq);
    e.widget_id = row[4];
    auto kind = parse_event_kind(row[5]);
    if (!kind) event_table.fail(i, "kind must be add or update");
    e.kind = *kind;
    e.pose = event_table.pose(i, 6);
    e.at = event_table.timestamp(i, 13);
    if (!widget_ids.contains(e.widget_id) && !store.widget(e.widget_id)) {
      throw Error(ErrorCode::DanglingReference, "event references missing widget " + e.widget_id);
    }
    events[e.scenario].push_back(std::move(e));
  }
  for (auto& [key, log] : events) {
    std::sort(log.begin(), log.end(),
              [](const InteractionEvent& a, const InteractionEvent& b) { return a.seq < b.seq; });
    fold_events(key, log);
  }

  std::map<ScenarioKey, std::vector<PoseSample>> samples;
  for (std::size_t i = 0; i < sample_table.size(); ++i) {
    PoseSample s{sample_table.scenario(i, 0), sample_table.pose(i, 3), sample_table.timestamp(i, 10)};
    auto& trace = samples[s.scenario];
    if (!trace.empty() && s.at < trace.back().at) {
      throw Error(ErrorCode::TimestampRegression, "pose_samples.csv row " + std::to_string(i + 2));
    }
    trace.push_back(std::move(s));
  }

  std::vector<Annotation> annotations;
  for (std::size_t i = 0; i < annotation_table.size(); ++i) {
    const auto& row = annotation_table.row(i);
    Annotation a;
    a.widget_id = row[0];
    a.app_name = row[1];
    a.screenshot_desc = row[2];
    a.widget_desc = row[3];
    a.functionality = row[4];
    a.excluded_parts = row[5];
    std::string_view types = row[6];
    while (!types.empty()) {
      const auto sep = types.find(';');
      auto token = types.substr(0, sep);
      auto parsed = parse_ui_type(token);
      if (!parsed) annotation_table.fail(i, "unknown ui type '" + std::string(token) + "'");
      a.ui_types.insert(*parsed);
      types = sep == std::string_view::npos ? std::string_view{} : types.substr(sep + 1);
    }
    a.category = row[7];
    if (!row[8].empty()) a.cluster_id = row[8];
    if (!row[9].empty()) {
      auto activity = parse_activity_type(row[9]);
      if (!activity) annotation_table.fail(i, "unknown activity type '" + row[9] + "'");
      a.activity_type = *activity;
    }
    const auto version = annotation_table.integer(i, 10);
    if (version < 0) annotation_table.fail(i, "negative version");
    a.version = static_cast<std::uint64_t>(version);
    if (!widget_ids.contains(a.widget_id) && !store.widget(a.widget_id)) {
      throw Error(ErrorCode::DanglingReference, "annotation references missing widget " + a.widget_id);
    }
    annotations.push_back(std::move(a));
  }

  // Blobs: every file in images/ is imported; every referenced hash must be there.
  std::map<BlobHash, std::string> blobs;
  if (fs::is_directory(dir / "images")) {
    for (const auto& entry : fs::directory_iterator(dir / "images")) {
      if (!entry.is_regular_file()) continue;
      auto bytes = detail::read_file(entry.path());
      const auto name = entry.path().filename().string();
      if (sha256_hex(bytes) != name) {
        throw Error(ErrorCode::IntegrityError, "images/" + name + " does not match its content hash");
      }
      blobs.emplace(name, std::move(bytes));
    }
  }
  auto require_blob = [&](const BlobHash& hash, const std::string& owner) {
    if (!blobs.contains(hash) && !store.has_blob(hash)) {
      throw Error(ErrorCode::MissingBlob, owner + " references missing image " + hash);
    }
  };
  for (const auto& s : screenshots) require_blob(s.image_ref, "screenshot " + s.id);
  for (const auto& w : widgets) require_blob(w.image_ref, "widget " + w.id);

  manifest.scenarios = scenarios.size();
  manifest.screenshots = screenshots.size();
  manifest.widgets = widgets.size();
  manifest.events = event_table.size();
  manifest.pose_samples = sample_table.size();
  manifest.annotations = annotations.size();
  manifest.blobs = blobs.size();

  if (fs::exists(dir / "manifest.json")) {
    const auto j = Json::parse(detail::read_file(dir / "manifest.json"), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("counts")) {
      throw Error(ErrorCode::SchemaMismatch, "unreadable manifest.json");
    }
    if (j.value("schema_version", "") != kDatasetSchemaVersion) {
      throw Error(ErrorCode::SchemaMismatch, "unsupported schema_version");
    }
    const auto& counts = j["counts"];
    DatasetManifest declared;
    declared.scenarios = read_count(counts, "scenarios");
    declared.screenshots = read_count(counts, "screenshots");
    declared.widgets = read_count(counts, "widgets");
    declared.events = read_count(counts, "events");
    declared.pose_samples = read_count(counts, "pose_samples");
    declared.annotations = read_count(counts, "annotations");
    declared.blobs = read_count(counts, "blobs");
    if (declared != manifest) {
      throw Error(ErrorCode::SchemaMismatch, "manifest counts do not match the CSV row counts");
    }
  }

  for (const auto& [hash, bytes] : blobs) store.put_blob(bytes);
  for (const auto& key : scenarios) store.put_scenario(key);
  for (const auto& s : screenshots) store.put_screenshot(s);
  for (const auto& w : widgets) store.put_widget(w);
  for (const auto& [key, log] : events) {
    for (const auto& e : log) store.import_event(e);
  }
  for (const auto& [key, trace] : samples) {
    store.put_scenario(key);
    const auto existing = store.pose_samples(key);
    const auto common = std::min(existing.size(), trace.size());
    if (!std::equal(existing.begin(), existing.begin() + static_cast<std::ptrdiff_t>(common),
                    trace.begin())) {
      throw Error(ErrorCode::DuplicateId, "pose trace of " + key.to_string() + " conflicts with store");
    }
    for (std::size_t i = existing.size(); i < trace.size(); ++i) store.append_pose_sample(trace[i]);
  }
  for (const auto& a : annotations) store.import_annotation(a);
  return manifest;
}

}  // namespace layoutminer
