// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support/toy_graphs.hpp"

#include <array>
#include <cmath>

#include "cnen/harness.hpp"

namespace cnen::testing {

TemporalGraph four_node_graph() {
  const std::vector<std::array<double, 3>> raw = {
      {0, 1, 1}, {1, 2, 2}, {2, 3, 2}, {0, 2, 3}, {3, 1, 4}, {0, 3, 5},
      {1, 2, 5}, {2, 0, 6}, {3, 2, 7}, {1, 0, 8}, {0, 1, 9}, {2, 3, 9},
      {1, 3, 10}, {0, 2, 11}, {3, 0, 12}, {2, 1, 13}};
  std::vector<EdgeEvent> ev;
  RowMatrix ef(static_cast<Eigen::Index>(raw.size()), 2);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    ev.push_back({static_cast<NodeId>(raw[i][0]), static_cast<NodeId>(raw[i][1]), raw[i][2], 0});
    ef(static_cast<Eigen::Index>(i), 0) = 0.1 * static_cast<double>(i) - 0.5;
    ef(static_cast<Eigen::Index>(i), 1) = std::cos(static_cast<double>(i));
  }
  auto g = make_graph(std::move(ev), std::move(ef));
  g.node_feats.resize(4, 3);
  g.node_feats << 0.2, -0.4, 0.9, 1.0, 0.3, -0.7, -0.5, 0.8, 0.1, 0.6, -0.2, -0.3;
  return g;
}

RunConfig tiny_config() {
  RunConfig c;
  c.seq_len = 3;
  c.long_size = 8;
  c.short_size = 4;
  c.hidden = 4;
  c.time_dim = 4;
  c.out_dim = 3;
  c.layers = 2;
  c.batch_size = 4;
  c.seed = 11;
  return c;
}

LinkBatch four_node_batch(const TemporalGraph& g, const RunConfig& cfg,
                          ModelParams& params) {
  Harness h(g, cfg);
  const std::span<const EdgeEvent> all(g.events);
  h.replay(all.first(12));
  const std::vector<NodeId> negs = {3, 1, 0, 2};
  params = h.params();
  return h.encode_batch(all.subspan(12, 4), negs);
}

}  // namespace cnen::testing
