// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "cnen/encoder.hpp"
#include "cnen/event_log.hpp"
#include "cnen/history.hpp"
#include "cnen/neighbor_memory.hpp"

namespace cnen {

struct FeatureContext {
  const TemporalGraph* graph = nullptr;
  const TemporalDiverseMemory* memory = nullptr;
  MatchMode matching = MatchMode::kLiteral;
  bool use_cne = true;
};

// Writes sequence `slot` of `batch`: raw node/edge features, time gaps and
// co-neighbor counts scaled by the table width. With use_cne off the count
// columns stay zero and the memory is never read.
void fill_sequence(SequenceBatch& batch, std::size_t slot,
                   const FeatureContext& ctx, NodeId anchor, NodeId other,
                   const NeighborSequence& seq,
                   std::vector<CoNeighborFeature>& scratch);

}  // namespace cnen
