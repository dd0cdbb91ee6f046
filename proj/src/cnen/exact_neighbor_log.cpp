// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/exact_neighbor_log.hpp"

#include <algorithm>
#include <iterator>

namespace cnen {

void ExactNeighborLog::apply_link_update(NodeId u, NodeId v,
                                         const NeighborSequence& seq_u,
                                         const NeighborSequence& seq_v,
                                         bool two_order, bool neighbor_update) {
  auto peers = [](const NeighborSequence& s) {
    std::vector<NodeId> out;
    for (std::size_t k = 1; k < s.entries.size(); ++k)
      if (s.entries[k].valid) out.push_back(s.entries[k].peer);
    return out;
  };
  const auto nu = peers(seq_u);
  const auto nv = peers(seq_v);

  sets_.at(u).insert(v);
  sets_.at(v).insert(u);
  if (two_order) {
    sets_[u].insert(nv.begin(), nv.end());
    sets_[v].insert(nu.begin(), nu.end());
  }
  if (neighbor_update) {
    for (NodeId i : nu) sets_.at(i).insert(v);
    for (NodeId j : nv) sets_.at(j).insert(u);
  }
}

std::size_t exact_common_neighbors(const ExactNeighborLog& log, NodeId a, NodeId b) {
  const auto& sa = log.stored(a);
  const auto& sb = log.stored(b);
  std::size_t n = 0;
  auto ia = sa.begin();
  auto ib = sb.begin();
  while (ia != sa.end() && ib != sb.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++n;
      ++ia;
      ++ib;
    }
  }
  return n;
}

}  // namespace cnen
