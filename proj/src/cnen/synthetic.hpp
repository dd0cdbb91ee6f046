// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

#include "cnen/event_log.hpp"

namespace cnen {

struct TriadicOptions {
  std::size_t num_nodes = 2000;
  std::size_t num_events = 50000;
  // Chance that an event closes a triangle; otherwise the destination is
  // uniform.
  double closure_prob = 0.8;
  // Each node's current neighborhood is its last `window` distinct peers.
  std::size_t window = 16;
  std::uint64_t seed = 0;
};

// Source uniform; with probability closure_prob the destination v is drawn
// with weight |N(u) ∩ N(v)| over current neighborhoods. No features.
TemporalGraph triadic_closure_stream(const TriadicOptions& opts);

// Uniformly random edges with strictly increasing integer timestamps.
TemporalGraph random_stream(std::size_t num_nodes, std::size_t num_events,
                            std::uint64_t seed);

}  // namespace cnen
