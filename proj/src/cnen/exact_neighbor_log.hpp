// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "cnen/history.hpp"
#include "cnen/types.hpp"

namespace cnen {

// Unbounded neighbor sets replayed with the same 1-order / 2-order / neighbor
// update schema as the sketch. Serves as the exact reference for
// co-neighbor counts; it shares no code with HashTableMemory.
class ExactNeighborLog {
 public:
  explicit ExactNeighborLog(std::size_t num_nodes) : sets_(num_nodes) {}

  void apply_link_update(NodeId u, NodeId v, const NeighborSequence& seq_u,
                         const NeighborSequence& seq_v, bool two_order,
                         bool neighbor_update);

  const std::set<NodeId>& stored(NodeId n) const { return sets_.at(n); }
  std::size_t num_nodes() const { return sets_.size(); }

 private:
  std::vector<std::set<NodeId>> sets_;
};

// |stored(a) ∩ stored(b)|
std::size_t exact_common_neighbors(const ExactNeighborLog& log, NodeId a, NodeId b);

}  // namespace cnen
