// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "cnen/types.hpp"

namespace cnen {

struct Interaction {
  NodeId peer;
  Timestamp t;
  EdgeIndex edge_idx;
};

struct SequenceEntry {
  NodeId peer;
  Timestamp delta_t;  // query time minus interaction time, >= 0
  EdgeIndex edge_idx; // kNoEdge for the self entry and padding
  bool valid;
};

// Fixed-length first-hop neighborhood of `anchor` as seen just before `t`.
// entries[0] is always the anchor itself; padding uses peer == sentinel.
struct NeighborSequence {
  NodeId anchor = 0;
  Timestamp t = 0.0;
  std::vector<SequenceEntry> entries;

  std::size_t length() const { return entries.size(); }
  std::size_t valid_count() const;
};

// Per-node append-only interaction lists.
class HistoryStore {
 public:
  HistoryStore() = default;
  HistoryStore(std::size_t num_nodes, NodeId sentinel);

  void record(NodeId u, NodeId v, Timestamp t, EdgeIndex edge_idx);

  // Self entry, then up to l_s - 1 interactions with t_hat < t, most recent
  // first, then padding.
  NeighborSequence recent_sequence(NodeId anchor, Timestamp t,
                                   std::size_t seq_len) const;

  const std::vector<Interaction>& history(NodeId n) const { return lists_.at(n); }
  std::size_t num_nodes() const { return lists_.size(); }
  NodeId sentinel() const { return sentinel_; }
  void clear();

 private:
  std::vector<std::vector<Interaction>> lists_;
  NodeId sentinel_ = 0;
};

}  // namespace cnen
