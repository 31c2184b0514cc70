#include <doctest.h>

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <fstream>
#include <random>
#include <thread>

#include <httplib.h>

#include "client_fixtures.hpp"
#include "layoutminer/analysis/report.hpp"
#include "layoutminer/reconstruct/scene.hpp"
#include "layoutminer/store/dataset_io.hpp"
#include "layoutminer/sync/sync_service.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace layoutminer;
using namespace lm_test;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string quote(const std::string& arg) {
  std::string q = "'";
  for (char c : arg) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return q + "'";
}

RunResult run(const TempDir& scratch, const std::vector<std::string>& args) {
  std::string cmd = quote(LAYOUTMINER_BIN);
  for (const auto& a : args) cmd += " " + quote(a);
  const auto out = scratch / "stdout.txt";
  const auto err = scratch / "stderr.txt";
  cmd += " > " + quote(out.string()) + " 2> " + quote(err.string()) + " < /dev/null";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

// Dataset directory built from a random fixture.
fs::path fixture_dataset(const TempDir& dir, std::uint64_t seed) {
  auto store = EventStore::in_memory();
  std::mt19937_64 rng(seed);
  build_random_dataset(*store, rng, 60);
  export_dataset(*store, dir / "dataset");
  return dir / "dataset";
}

}  // namespace

TEST_CASE("usage errors") {
  TempDir dir;
  const auto none = run(dir, {});
  CHECK(none.exit_code == 2);
  CHECK(none.out.empty());
  CHECK(none.err.find("Usage:") != std::string::npos);

  const auto help = run(dir, {"--help"});
  CHECK(help.exit_code == 0);
  CHECK(help.out.find("analyze") != std::string::npos);

  CHECK(run(dir, {"frobnicate"}).exit_code == 2);
  CHECK(run(dir, {"--data-dir", (dir / "s").string(), "analyze", "nope"}).exit_code == 2);
  CHECK(run(dir, {"--data-dir", (dir / "s").string(), "scene", "not-a-scenario"}).exit_code == 2);
  CHECK(run(dir, {"--data-dir", (dir / "s").string(), "analyze", "clusters", "--sd", "weird"}).exit_code == 2);
}

TEST_CASE("analyze on an empty store") {
  TempDir dir;
  const auto r = run(dir, {"--data-dir", (dir / "store").string(), "analyze", "categories"});
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("no data") != std::string::npos);
}

TEST_CASE("import then analyze") {
  TempDir dir;
  const auto dataset = fixture_dataset(dir, 9);
  const auto data = (dir / "store").string();
  const auto imported = run(dir, {"--data-dir", data, "import", dataset.string()});
  REQUIRE(imported.exit_code == 0);
  CHECK(Json::parse(imported.out)["counts"]["widgets"].get<int>() > 0);

  auto reference = EventStore::in_memory();
  import_dataset(*reference, dataset);
  const Dataset ds(reference->snapshot());

  const auto report_file = dir / "out" / "categories.json";
  REQUIRE(run(dir, {"--data-dir", data, "analyze", "categories", "--out", report_file.string()}).exit_code == 0);
  CHECK(slurp(report_file) == build_report(ds, "categories", {}).json.dump(2) + "\n");

  ReportOptions computed;
  computed.clusters = ClusterSource::computed_with(0.5);
  computed.sd = SdKind::Sample;
  const auto clusters = run(dir, {"analyze", "clusters", "--data-dir", data, "--clusters", "computed",
                                  "--threshold-m", "0.5", "--sd", "sample", "--format", "csv"});
  REQUIRE(clusters.exit_code == 0);
  CHECK(clusters.out == build_report(ds, "clusters", computed).csv);

  ReportOptions office;
  office.environment = "office";
  office.top_k = 3;
  const auto top = run(dir, {"--data-dir", data, "analyze", "functionalities", "--env", "office", "--k", "3"});
  CHECK(top.out == build_report(ds, "functionalities", office).json.dump(2) + "\n");

  CHECK(run(dir, {"--data-dir", data, "analyze", "static-dynamic"}).exit_code == 1);
  Json labels = Json::object();
  TaskLabels task_labels;
  for (std::size_t i = 0; i < fixture_tasks().size(); ++i) {
    labels[fixture_tasks()[i]] = i % 2 ? "dynamic" : "static";
    task_labels[fixture_tasks()[i]] = i % 2 ? TaskNature::Dynamic : TaskNature::Static;
  }
  std::ofstream(dir / "labels.json") << labels.dump();
  ReportOptions labelled_options;
  labelled_options.task_labels = task_labels;
  const auto labelled = run(dir, {"--data-dir", data, "analyze", "static-dynamic", "--task-labels",
                                  (dir / "labels.json").string(), "--format", "csv"});
  CHECK(labelled.exit_code == 0);
  CHECK(labelled.out == build_report(ds, "static-dynamic", labelled_options).csv);

  // Every report is reproducible byte for byte.
  for (const auto& name : report_names()) {
    if (name == "static-dynamic") continue;
    const auto a = run(dir, {"--data-dir", data, "analyze", name});
    const auto b = run(dir, {"--data-dir", data, "analyze", name, "--format", "json"});
    CHECK(a.exit_code == b.exit_code);
    CHECK(a.out == b.out);
  }

  // Exporting reproduces the imported dataset.
  REQUIRE(run(dir, {"--data-dir", data, "export", (dir / "again").string()}).exit_code == 0);
  CHECK(slurp(dir / "again" / "events.csv") == slurp(dataset / "events.csv"));
  CHECK(slurp(dir / "again" / "manifest.json") == slurp(dataset / "manifest.json"));
}

TEST_CASE("scene export") {
  TempDir dir;
  const auto dataset = fixture_dataset(dir, 4);
  const auto data = (dir / "store").string();
  REQUIRE(run(dir, {"--data-dir", data, "import", dataset.string()}).exit_code == 0);
  auto reference = EventStore::in_memory();
  import_dataset(*reference, dataset);
  const auto key = reference->scenarios().front();
  const auto log = reference->events(key);
  REQUIRE_FALSE(log.empty());

  const auto whole = run(dir, {"--data-dir", data, "scene", key.to_string()});
  REQUIRE(whole.exit_code == 0);
  CHECK(whole.out == serialize_scene(export_scene(*reference, key)));

  SceneOptions options;
  options.quad_width_m = 0.5;
  options.flip_normals = true;
  options.overlay_refs = {"floorplan.png"};
  const auto custom = run(dir, {"--data-dir", data, "scene", key.to_string(), "--as-of", "1", "--quad-width-m",
                                "0.5", "--flip-normals", "--overlay", "floorplan.png"});
  CHECK(custom.out == serialize_scene(export_scene(*reference, key, 1, options)));

  const auto steps_dir = dir / "steps";
  REQUIRE(run(dir, {"--data-dir", data, "scene", key.to_string(), "--step", "--out", steps_dir.string()})
              .exit_code == 0);
  std::size_t files = 0;
  for (const auto& entry : fs::directory_iterator(steps_dir)) files += entry.path().extension() == ".json";
  CHECK(files == log.size());
  char last[32];
  std::snprintf(last, sizeof last, "step-%06zu.scene.json", log.size());
  CHECK(slurp(steps_dir / last) == whole.out);

  CHECK(run(dir, {"--data-dir", data, "scene", "P99/nowhere/none"}).exit_code == 1);
  CHECK(run(dir, {"--data-dir", data, "scene", key.to_string(), "--as-of", "100000"}).exit_code == 1);
}

TEST_CASE("simulate and preview against the local store") {
  TempDir dir;
  std::mt19937_64 rng(8);
  const auto script = random_script(rng, scenario("P01", "living room", "relax"), 8, "cli");
  save_script(script, dir / "script.json");
  const auto data = (dir / "store").string();
  const auto sim = run(dir, {"--data-dir", data, "--poll-ms", "1", "simulate", (dir / "script.json").string()});
  REQUIRE(sim.exit_code == 0);
  const auto summary = Json::parse(sim.out);
  CHECK(summary["convergence"]["equal"] == true);
  CHECK(summary["transcript"].size() == script.steps.size());

  const auto preview = run(dir, {"--data-dir", data, "--poll-ms", "1", "preview", "P01/living room/relax"});
  REQUIRE(preview.exit_code == 0);
  auto store = EventStore::open(data);
  CHECK(layout_from_json(Json::parse(preview.out)) == SyncService(*store).layout(script.scenario));

  std::ofstream(dir / "bad.json") << R"({"scenario": {"participant_id": "P01", "environment": "a", "task": "b"},
    "steps": [{"at_ms": 0, "action": "place", "payload": {"widget_id": "w1",
      "pose": {"px": 0, "py": 0, "pz": 0, "qw": 1, "qx": 0, "qy": 0, "qz": 0}}}]})";
  const auto bad = run(dir, {"--data-dir", data, "simulate", (dir / "bad.json").string()});
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("ScriptError") != std::string::npos);
  CHECK(run(dir, {"simulate", (dir / "script.json").string(), "--url", "http://127.0.0.1:1"}).exit_code == 1);
}

TEST_CASE("serve answers both APIs and stops on SIGINT") {
  TempDir dir;
  int fds[2];
  REQUIRE(::pipe(fds) == 0);
  const pid_t pid = ::fork();
  REQUIRE(pid >= 0);
  if (pid == 0) {
    ::dup2(fds[1], STDOUT_FILENO);
    ::close(fds[0]);
    ::close(fds[1]);
    const auto data = (dir / "store").string();
    ::execl(LAYOUTMINER_BIN, LAYOUTMINER_BIN, "serve", "--data-dir", data.c_str(), "--port", "0",
            static_cast<char*>(nullptr));
    _exit(127);
  }
  ::close(fds[1]);
  std::string line;
  char c = 0;
  while (::read(fds[0], &c, 1) == 1 && c != '\n') line += c;
  REQUIRE(line.rfind("listening on ", 0) == 0);
  const auto url = line.substr(13);

  httplib::Client client(url);
  auto created = client.Post("/scenarios", R"({"participant_id":"P01","environment":"office","task":"work"})",
                             "application/json");
  REQUIRE(created);
  CHECK(created->status == 200);
  auto summary = client.Get("/api/summary");
  REQUIRE(summary);
  CHECK(summary->status == 200);
  CHECK(Json::parse(summary->body)["counts"]["widgets"] == 0);

  ::kill(pid, SIGINT);
  int status = 0;
  ::waitpid(pid, &status, 0);
  ::close(fds[0]);
  CHECK(WIFEXITED(status));
  CHECK(WEXITSTATUS(status) == 0);
}
