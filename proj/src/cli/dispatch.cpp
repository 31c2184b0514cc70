#include "layoutminer/cli/dispatch.hpp"

#include <CLI11.hpp>
#include <signal.h>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "layoutminer/analysis/report.hpp"
#include "layoutminer/client/convergence.hpp"
#include "layoutminer/client/placement.hpp"
#include "layoutminer/client/preview.hpp"
#include "layoutminer/client/script.hpp"
#include "layoutminer/core/error.hpp"
#include "layoutminer/reconstruct/scene.hpp"
#include "layoutminer/store/dataset_io.hpp"
#include "layoutminer/sync/http_routes.hpp"
#include "layoutminer/sync/service_host.hpp"

namespace layoutminer {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GlobalFlags {
  std::string data_dir = "layoutminer-data";
  std::uint16_t port = 8080;
  long poll_ms = kDefaultPollInterval.count();
  std::string categories_file;
};

ScenarioKey scenario_arg(const std::string& text) {
  auto key = ScenarioKey::parse(text);
  if (!key) throw UsageError("scenario must look like participant/environment/task, got '" + text + "'");
  return *key;
}

void write_output(const std::string& content, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream file(target, std::ios::binary | std::ios::trunc);
  file << content;
  if (!file) throw Error(ErrorCode::IoError, "cannot write " + path);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path);
  auto j = Json::parse(in, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::InvalidArgument, path + " is not valid JSON");
  return j;
}

std::unique_ptr<EventStore> open_store(const GlobalFlags& flags) { return EventStore::open(flags.data_dir); }

struct LocalSync {
  explicit LocalSync(const GlobalFlags& flags) : store(open_store(flags)), service(*store), endpoint(service) {}
  std::unique_ptr<EventStore> store;
  SyncService service;
  LocalEndpoint endpoint;
};

// Either an HTTP endpoint for `url`, or the local store when `url` is empty.
class EndpointChoice {
 public:
  EndpointChoice(const GlobalFlags& flags, const std::string& url) {
    if (url.empty()) {
      local_ = std::make_unique<LocalSync>(flags);
    } else {
      http_ = std::make_unique<HttpEndpoint>(url);
    }
  }
  SyncEndpoint& get() { return http_ ? static_cast<SyncEndpoint&>(*http_) : local_->endpoint; }

 private:
  std::unique_ptr<LocalSync> local_;
  std::unique_ptr<HttpEndpoint> http_;
};

int run_serve(const GlobalFlags& flags, const std::string& bind, std::ostream& out) {
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  auto store = open_store(flags);
  HostOptions options;
  options.bind_address = bind;
  options.port = flags.port;
  options.categories_file = flags.categories_file;
  ServiceHost host(*store, options);
  host.start();
  out << "listening on " << host.base_url() << std::endl;
  int received = 0;
  sigwait(&signals, &received);
  host.stop();
  out << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collects, syncs, annotates and analyzes XR widget layouts.", "layoutminer"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--data-dir", flags.data_dir, "Store directory")
      ->envname("LAYOUTMINER_DATA_DIR")
      ->capture_default_str();
  app.add_option("--port", flags.port, "HTTP port for serve")->envname("LAYOUTMINER_PORT")->capture_default_str();
  app.add_option("--categories", flags.categories_file, "Category list file, one label per line")
      ->envname("LAYOUTMINER_CATEGORIES")
      ->check(CLI::ExistingFile);
  app.add_option("--poll-ms", flags.poll_ms, "Preview poll interval in milliseconds")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  std::string bind = "127.0.0.1";
  auto* serve = app.add_subcommand("serve", "Run the sync and annotation HTTP APIs");
  serve->add_option("--bind", bind, "Address to bind")->capture_default_str();

  std::string dataset_dir;
  auto* import_cmd = app.add_subcommand("import", "Load an exported dataset directory into the store");
  import_cmd->add_option("dir", dataset_dir, "Dataset directory")->required();
  auto* export_cmd = app.add_subcommand("export", "Write the store as a dataset directory");
  export_cmd->add_option("dir", dataset_dir, "Dataset directory")->required();

  std::string report_name;
  std::string out_path;
  std::string format = "json";
  std::string environment;
  double threshold_m = kDefaultClusterThresholdM;
  std::string clusters = "annotated";
  std::string sd = "population";
  std::string task_labels_path;
  std::size_t top_k = 10;
  auto* analyze = app.add_subcommand("analyze", "Compute a dataset report");
  analyze->add_option("report", report_name, "Report name")->required()->check(CLI::IsMember(report_names()));
  analyze->add_option("--out", out_path, "Output file (default: standard output)");
  analyze->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  analyze->add_option("--env", environment, "Restrict to one environment");
  analyze->add_option("--threshold-m", threshold_m, "Clustering distance threshold in metres")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  analyze->add_option("--threshold", threshold_m, "Alias of --threshold-m")->check(CLI::PositiveNumber);
  analyze->add_option("--clusters", clusters, "Cluster source")
      ->check(CLI::IsMember({"annotated", "computed"}))
      ->capture_default_str();
  analyze->add_option("--sd", sd, "Standard deviation kind")
      ->check(CLI::IsMember({"population", "sample"}))
      ->capture_default_str();
  analyze->add_option("--task-labels", task_labels_path, "JSON object mapping task to static|dynamic");
  analyze->add_option("--k", top_k, "Entries per environment for functionalities")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string script_path;
  std::string url;
  std::size_t quiet_polls = 3;
  bool pace = false;
  auto* simulate = app.add_subcommand("simulate", "Replay a session script and check preview convergence");
  simulate->add_option("script", script_path, "Session script JSON")->required();
  simulate->add_option("--url", url, "Service URL (default: the local store)");
  simulate->add_option("--quiet-polls", quiet_polls, "Empty polls before the preview stops")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_flag("--pace", pace, "Honour the script's at_ms spacing");

  std::string scenario_text;
  long wait_ms = 0;
  auto* preview = app.add_subcommand("preview", "Follow a scenario's change feed and print the layout");
  preview->add_option("scenario", scenario_text, "participant/environment/task")->required();
  preview->add_option("--url", url, "Service URL (default: the local store)");
  preview->add_option("--quiet-polls", quiet_polls, "Empty polls before stopping")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  preview->add_option("--wait-ms", wait_ms, "Long-poll budget per request")->check(CLI::Range(0L, kMaxWaitMs));

  bool steps = false;
  std::optional<Seq> as_of;
  double quad_width_m = kDefaultQuadWidthM;
  bool flip_normals = false;
  std::vector<std::string> overlays;
  auto* scene = app.add_subcommand("scene", "Export a scenario as a scene file");
  scene->add_option("scenario", scenario_text, "participant/environment/task")->required();
  auto* step_flag = scene->add_flag("--step", steps, "One scene per event; --out names a directory");
  scene->add_option("--as-of", as_of, "Fold events up to this seq")->excludes(step_flag);
  scene->add_option("--out", out_path, "Output file or directory (default: standard output)");
  scene->add_option("--quad-width-m", quad_width_m, "Quad width in metres")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  scene->add_flag("--flip-normals", flip_normals, "Turn quads to face the other way");
  scene->add_option("--overlay", overlays, "Overlay reference, repeatable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (argc > 1) err << "error: " << e.what() << "\n";
    err << app.help();
    return kExitUsage;
  }

  try {
    if (serve->parsed()) return run_serve(flags, bind, out);

    if (import_cmd->parsed()) {
      auto store = open_store(flags);
      out << manifest_to_json(import_dataset(*store, dataset_dir));
      return kExitOk;
    }

    if (export_cmd->parsed()) {
      auto store = open_store(flags);
      out << manifest_to_json(export_dataset(*store, dataset_dir));
      return kExitOk;
    }

    if (analyze->parsed()) {
      ReportOptions options;
      if (!environment.empty()) options.environment = environment;
      options.clusters = clusters == "computed" ? ClusterSource::computed_with(threshold_m) : ClusterSource::annotated();
      options.sd = *parse_sd_kind(sd);
      if (!task_labels_path.empty()) options.task_labels = task_labels_from_json(read_json_file(task_labels_path));
      options.top_k = top_k;
      auto store = open_store(flags);
      const Dataset dataset(store->snapshot());
      const auto report = build_report(dataset, report_name, options);
      write_output(format == "csv" ? report.csv : report.json.dump(2) + "\n", out_path, out);
      return kExitOk;
    }

    if (simulate->parsed()) {
      const auto script = load_script(script_path);
      EndpointChoice endpoint(flags, url);
      PlacementOptions placement;
      placement.pace = pace;
      const auto transcript = run_placement(script, endpoint.get(), placement);
      PreviewOptions options;
      options.poll_interval = std::chrono::milliseconds(flags.poll_ms);
      options.stop_after_quiet_polls = quiet_polls;
      const auto result = run_preview(script.scenario, endpoint.get(), options);
      const auto report = check_convergence(transcript, result.layout);
      Json summary{{"scenario", to_json(script.scenario)},
                   {"transcript", to_json(transcript)},
                   {"preview_seq", result.layout.as_of_seq},
                   {"polls", result.polls},
                   {"convergence", to_json(report)}};
      out << summary.dump(2) << "\n";
      if (!report.equal) {
        err << "error: preview did not converge to the placement transcript\n";
        return kExitDomainError;
      }
      return kExitOk;
    }

    if (preview->parsed()) {
      const auto key = scenario_arg(scenario_text);
      EndpointChoice endpoint(flags, url);
      PreviewOptions options;
      options.poll_interval = std::chrono::milliseconds(flags.poll_ms);
      options.stop_after_quiet_polls = quiet_polls;
      options.wait = std::chrono::milliseconds(wait_ms);
      out << to_json(run_preview(key, endpoint.get(), options).layout).dump(2) << "\n";
      return kExitOk;
    }

    if (scene->parsed()) {
      const auto key = scenario_arg(scenario_text);
      SceneOptions options;
      options.quad_width_m = quad_width_m;
      options.flip_normals = flip_normals;
      options.overlay_refs = overlays;
      auto store = open_store(flags);
      if (!steps) {
        write_output(serialize_scene(export_scene(*store, key, as_of, options)), out_path, out);
        return kExitOk;
      }
      const auto history = step_history(*store, key, options);
      if (out_path.empty() || out_path == "-") {
        Json all = Json::array();
        for (const auto& s : history) all.push_back(to_json(s));
        out << all.dump(2) << "\n";
        return kExitOk;
      }
      fs::create_directories(out_path);
      for (const auto& s : history) {
        char name[32];
        std::snprintf(name, sizeof name, "step-%06llu", static_cast<unsigned long long>(s.as_of_seq));
        write_output(serialize_scene(s), (fs::path(out_path) / (name + std::string(kSceneFileExtension))).string(),
                     out);
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace layoutminer
