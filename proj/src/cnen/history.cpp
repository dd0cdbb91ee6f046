// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/history.hpp"

#include <algorithm>
#include <string>

namespace cnen {

std::size_t NeighborSequence::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(),
                    [](const SequenceEntry& e) { return e.valid; }));
}

HistoryStore::HistoryStore(std::size_t num_nodes, NodeId sentinel)
    : lists_(num_nodes), sentinel_(sentinel) {}

void HistoryStore::record(NodeId u, NodeId v, Timestamp t, EdgeIndex edge_idx) {
  if (u >= lists_.size() || v >= lists_.size())
    throw DataError("history record: node id out of range");
  auto& lu = lists_[u];
  auto& lv = lists_[v];
  if ((!lu.empty() && t < lu.back().t) || (!lv.empty() && t < lv.back().t))
    throw DataError("history record: timestamp " + std::to_string(t) +
                    " precedes the last recorded interaction");
  lu.push_back({v, t, edge_idx});
  if (u != v) lv.push_back({u, t, edge_idx});
}

NeighborSequence HistoryStore::recent_sequence(NodeId anchor, Timestamp t,
                                               std::size_t seq_len) const {
  if (seq_len == 0) throw ConfigError("sequence length must be >= 1");
  NeighborSequence seq;
  seq.anchor = anchor;
  seq.t = t;
  seq.entries.assign(seq_len, SequenceEntry{sentinel_, 0.0, kNoEdge, false});
  seq.entries[0] = {anchor, 0.0, kNoEdge, true};

  const auto& list = lists_.at(anchor);
  // First interaction at or after t; everything before it is strictly older.
  auto end = std::lower_bound(
      list.begin(), list.end(), t,
      [](const Interaction& a, Timestamp value) { return a.t < value; });
  std::size_t slot = 1;
  for (auto it = end; it != list.begin() && slot < seq_len; ++slot) {
    --it;
    seq.entries[slot] = {it->peer, t - it->t, it->edge_idx, true};
  }
  return seq;
}

void HistoryStore::clear() {
  for (auto& l : lists_) l.clear();
}

}  // namespace cnen
