#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>

#include "layoutminer/client/endpoint.hpp"

namespace layoutminer {

inline constexpr std::chrono::milliseconds kDefaultPollInterval{250};

// Delivery faults injected on the client side, each with a per-poll
// probability: re-apply the previous batch, split a batch into pieces, or
// ask for changes from before the local seq so batches overlap.
struct PreviewFaults {
  double redeliver = 0.0;
  double split = 0.0;
  double overlap = 0.0;
  std::uint64_t seed = 1;
};

struct PreviewOptions {
  std::chrono::milliseconds poll_interval = kDefaultPollInterval;
  // Long-poll budget passed to the change feed.
  std::chrono::milliseconds wait{0};
  std::size_t stop_after_quiet_polls = 3;
  // 0 means unbounded.
  std::size_t max_polls = 0;
  PreviewFaults faults;
};

struct PreviewResult {
  Layout layout;
  std::size_t polls = 0;
  std::size_t events_applied = 0;
  std::size_t events_ignored = 0;
};

// Polls the change feed and folds batches into a local layout until
// `stop_after_quiet_polls` consecutive polls bring nothing new.
PreviewResult run_preview(const ScenarioKey& scenario, SyncEndpoint& endpoint,
                          const PreviewOptions& options = {});

}  // namespace layoutminer
