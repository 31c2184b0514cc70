#include "layoutminer/client/preview.hpp"

#include <random>
#include <thread>

#include "layoutminer/core/error.hpp"
#include "layoutminer/core/fold.hpp"

namespace layoutminer {

namespace {

std::size_t apply_batch(Layout& layout, std::span<const InteractionEvent> events, const PreviewFaults& faults,
                        std::mt19937_64& rng) {
  std::bernoulli_distribution split(faults.split);
  if (events.size() < 2 || !split(rng)) return apply_events(layout, events);
  std::size_t applied = 0;
  std::size_t start = 0;
  while (start < events.size()) {
    const std::size_t len = 1 + rng() % (events.size() - start);
    applied += apply_events(layout, events.subspan(start, len));
    start += len;
  }
  return applied;
}

}  // namespace

PreviewResult run_preview(const ScenarioKey& scenario, SyncEndpoint& endpoint, const PreviewOptions& options) {
  if (options.stop_after_quiet_polls == 0) {
    throw Error(ErrorCode::InvalidArgument, "stop_after_quiet_polls must be at least 1");
  }
  const auto& faults = options.faults;
  std::mt19937_64 rng(faults.seed);
  std::bernoulli_distribution redeliver(faults.redeliver);
  std::bernoulli_distribution overlap(faults.overlap);

  PreviewResult result;
  result.layout.scenario = scenario;
  std::vector<InteractionEvent> previous;
  std::size_t quiet = 0;
  while (quiet < options.stop_after_quiet_polls) {
    if (options.max_polls != 0 && result.polls >= options.max_polls) break;
    if (result.polls > 0) std::this_thread::sleep_for(options.poll_interval);
    Seq since = result.layout.as_of_seq;
    const bool overlapped = since > 0 && overlap(rng);
    if (overlapped) since -= 1 + rng() % since;
    auto batch = endpoint.changes(scenario, since, options.wait);
    ++result.polls;

    std::size_t applied = apply_batch(result.layout, batch.events, faults, rng);
    std::size_t received = batch.events.size();
    if (!previous.empty() && redeliver(rng)) {
      applied += apply_batch(result.layout, previous, faults, rng);
      received += previous.size();
    }
    result.events_applied += applied;
    result.events_ignored += received - applied;
    if (!batch.events.empty()) previous = std::move(batch.events);
    // An overlapping poll returns at once with stale events, so it proves nothing.
    if (applied > 0) {
      quiet = 0;
    } else if (!overlapped) {
      ++quiet;
    }
  }
  return result;
}

}  // namespace layoutminer
