#pragma once

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "layoutminer/core/fold.hpp"
#include "layoutminer/store/event_store.hpp"
#include "support.hpp"

namespace lm_test {

inline const std::vector<ScenarioKey>& crash_scenarios() {
  static const std::vector<ScenarioKey> keys{scenario("P01", "office", "work"), scenario("P01", "kitchen", "cook"),
                                             scenario("P02", "office", "meeting")};
  return keys;
}

inline std::vector<WidgetId> crash_widget_ids() {
  std::vector<WidgetId> ids;
  for (int i = 0; i < 8; ++i) ids.push_back("w" + std::to_string(i));
  return ids;
}

// Child body: append events, pose samples and annotation writes forever,
// reporting each acknowledged event seq on `ack_fd`.
[[noreturn]] inline void crash_writer(const std::filesystem::path& dir, int ack_fd, unsigned seed) {
  try {
    auto store = EventStore::open(dir);
    std::mt19937 rng(seed);
    const auto& keys = crash_scenarios();
    const auto ids = crash_widget_ids();
    TimestampMs base = 0;
    for (const auto& key : keys) {
      store->put_scenario(key);
      const auto trace = store->pose_samples(key);
      if (!trace.empty()) base = std::max(base, trace.back().at);
    }
    for (std::uint64_t n = 0;; ++n) {
      const auto index = rng() % keys.size();
      const auto& key = keys[index];
      const auto& w = ids[rng() % ids.size()];
      bool added = false;
      for (const auto& e : store->events(key)) added = added || e.widget_id == w;
      const Seq seq = store->append_event(key, w, added ? EventKind::Update : EventKind::Add,
                                          pose_at(static_cast<double>(n)));
      const std::uint64_t record[2] = {index, seq};
      if (::write(ack_fd, record, sizeof record) != sizeof record) _exit(3);
      if (n % 5 == 0) store->append_pose_sample(PoseSample{key, pose_at(0), base + static_cast<TimestampMs>(n)});
      if (n % 7 == 0) {
        Annotation a;
        a.widget_id = w;
        a.category = "Utilities";
        a.ui_types = {UiType::InputControl};
        const auto current = store->annotation(w);
        store->upsert_annotation(a, current ? current->version : 0);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "writer failed: %s\n", e.what());
    _exit(2);
  }
}

// Invariant violations of a reopened store, as readable strings.
inline std::vector<std::string> store_violations(EventStore& store) {
  std::vector<std::string> out;
  const auto snap = store.snapshot();
  for (const auto& [key, log] : snap.events) {
    for (std::size_t i = 0; i < log.size(); ++i) {
      if (log[i].seq != i + 1) out.push_back(key.to_string() + ": seq gap at " + std::to_string(i + 1));
    }
    try {
      fold_events(key, log);
    } catch (const std::exception& e) {
      out.push_back(key.to_string() + ": " + e.what());
    }
    for (const auto& e : log) {
      if (!snap.widgets.contains(e.widget_id)) out.push_back(key.to_string() + ": dangling " + e.widget_id);
    }
  }
  for (const auto& [key, trace] : snap.pose_samples) {
    for (std::size_t i = 1; i < trace.size(); ++i) {
      if (trace[i - 1].at > trace[i].at) out.push_back(key.to_string() + ": pose samples out of order");
    }
  }
  return out;
}

struct CrashReport {
  std::size_t rounds = 0;
  std::size_t acknowledged = 0;
  std::vector<std::string> violations;
};

// Repeatedly forks a writer against `dir`, SIGKILLs it at a random moment,
// reopens the store and checks it: every log must be a contiguous prefix
// holding at least every acknowledged event.
inline CrashReport run_crash_rounds(const std::filesystem::path& dir, int rounds, unsigned seed) {
  CrashReport report;
  {
    auto store = EventStore::open(dir);
    seed_widgets(*store, crash_widget_ids());
  }
  std::mt19937 rng(seed);
  std::map<std::size_t, Seq> acknowledged;
  for (int round = 0; round < rounds; ++round) {
    int fds[2];
    if (::pipe(fds) != 0) {
      report.violations.push_back("pipe failed");
      break;
    }
    const pid_t pid = ::fork();
    if (pid == 0) {
      ::close(fds[0]);
      crash_writer(dir, fds[1], seed + static_cast<unsigned>(round));
    }
    ::close(fds[1]);
    ::usleep(20000 + (rng() % 60000));
    ::kill(pid, SIGKILL);
    int status = 0;
    ::waitpid(pid, &status, 0);
    if (!WIFSIGNALED(status)) {
      report.violations.push_back("writer exited early with status " + std::to_string(WEXITSTATUS(status)));
    }
    std::uint64_t record[2];
    while (::read(fds[0], record, sizeof record) == sizeof record) {
      acknowledged[record[0]] = std::max(acknowledged[record[0]], record[1]);
      ++report.acknowledged;
    }
    ::close(fds[0]);

    try {
      auto store = EventStore::open(dir);
      for (auto& v : store_violations(*store)) report.violations.push_back(std::move(v));
      for (const auto& [index, seq] : acknowledged) {
        const auto& key = crash_scenarios()[index];
        const Seq durable = store->has_scenario(key) ? store->get_changes(key, 0).max_seq : 0;
        if (durable < seq) {
          report.violations.push_back(key.to_string() + ": acknowledged seq " + std::to_string(seq) + " lost");
        }
      }
    } catch (const std::exception& e) {
      report.violations.push_back(std::string("reopen failed: ") + e.what());
    }
    ++report.rounds;
  }
  return report;
}

}  // namespace lm_test
