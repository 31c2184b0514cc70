#pragma once

#include <span>

#include "layoutminer/core/types.hpp"

namespace layoutminer {

// Folds a complete, seq-ordered event log into its layout.
//
// Events must share one scenario, carry seqs 1, 2, 3, ... and never update a
// widget before adding it. Violations throw Error(NonMonotonicSeq),
// Error(UpdateBeforeAdd) or Error(ScenarioMismatch).
Layout fold_events(std::span<const InteractionEvent> events);

// Same as above but the scenario of an empty log is known.
Layout fold_events(const ScenarioKey& scenario, std::span<const InteractionEvent> events);

// Applies one event on top of `layout`, keyed by seq.
//
// Returns false and leaves the layout untouched when the event was already
// applied (seq <= as_of_seq). This makes re-delivery harmless. A seq beyond
// as_of_seq + 1 is a gap and throws NonMonotonicSeq.
bool apply_event(Layout& layout, const InteractionEvent& event);

// Applies a batch in order; returns how many events changed the layout.
std::size_t apply_events(Layout& layout, std::span<const InteractionEvent> events);

}  // namespace layoutminer
