// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/features.hpp"

namespace cnen {

void fill_sequence(SequenceBatch& batch, std::size_t slot,
                   const FeatureContext& ctx, NodeId anchor, NodeId other,
                   const NeighborSequence& seq,
                   std::vector<CoNeighborFeature>& scratch) {
  const auto& g = *ctx.graph;
  const std::size_t len = batch.seq_len;
  if (seq.entries.size() != len)
    throw ConfigError("sequence length does not match the batch layout");
  const std::size_t base = slot * len;

  if (ctx.use_cne) encode_side(*ctx.memory, anchor, other, seq, ctx.matching, scratch);
  const double inv_long =
      ctx.use_cne ? 1.0 / static_cast<double>(ctx.memory->long_table().width()) : 0.0;
  const double inv_short =
      ctx.use_cne && ctx.memory->has_short()
          ? 1.0 / static_cast<double>(ctx.memory->short_table().width())
          : 0.0;

  for (std::size_t j = 0; j < len; ++j) {
    const auto r = static_cast<Eigen::Index>(base + j);
    const auto& e = seq.entries[j];
    if (g.node_dim() > 0) {
      if (e.valid) batch.node_x.row(r) = g.node_feats.row(e.peer);
      else batch.node_x.row(r).setZero();
    }
    if (g.edge_dim() > 0) {
      if (e.edge_idx != kNoEdge) batch.edge_x.row(r) = g.edge_feats.row(e.edge_idx);
      else batch.edge_x.row(r).setZero();
    }
    batch.delta_t(r) = e.delta_t;
    if (ctx.use_cne) {
      const auto& f = scratch[j];
      batch.cn_long(r, 0) = f.long_pair.to_anchor * inv_long;
      batch.cn_long(r, 1) = f.long_pair.to_other * inv_long;
      batch.cn_short(r, 0) = f.short_pair.to_anchor * inv_short;
      batch.cn_short(r, 1) = f.short_pair.to_other * inv_short;
    } else {
      batch.cn_long.row(r).setZero();
      batch.cn_short.row(r).setZero();
    }
  }
}

}  // namespace cnen
