#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "layoutminer/client/endpoint.hpp"
#include "layoutminer/client/script.hpp"
#include "layoutminer/core/error.hpp"

namespace layoutminer {

struct TranscriptEntry {
  std::size_t step = 0;
  StepAction action = StepAction::CreateWidget;
  WidgetId widget_id;
  std::optional<Seq> seq;
  std::optional<Pose> pose;

  bool operator==(const TranscriptEntry&) const = default;
};

using Transcript = std::vector<TranscriptEntry>;

struct PlacementOptions {
  // Sleep between steps to reproduce the script's at_ms spacing.
  bool pace = false;
  std::function<void(const TranscriptEntry&)> on_step;
};

// A service error stopped the script. Carries the failing step and the
// transcript of the steps that completed.
class PlacementAborted : public Error {
 public:
  PlacementAborted(const Error& cause, std::size_t step, Transcript completed);

  ErrorCode cause() const noexcept { return code(); }
  std::size_t step() const noexcept { return step_; }
  const Transcript& transcript() const noexcept { return transcript_; }

 private:
  std::size_t step_;
  Transcript transcript_;
};

// Registers the scenario, then executes every step in order as the
// script's placement client.
Transcript run_placement(const SessionScript& script, SyncEndpoint& endpoint,
                         const PlacementOptions& options = {});

Json to_json(const Transcript& transcript);

}  // namespace layoutminer
