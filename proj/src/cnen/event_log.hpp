// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cnen/rng.hpp"
#include "cnen/types.hpp"

namespace cnen {

using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct EdgeEvent {
  NodeId src = 0;
  NodeId dst = 0;
  Timestamp t = 0.0;
  EdgeIndex edge_idx = 0;
};

// Chronologically sorted edge stream plus optional feature tables.
//
// Edge features are stored row-wise in `edge_feats` (|events| x d_E) so that
// row `edge_idx` belongs to event `edge_idx`. Node features are
// num_nodes x d_N. Either table may have zero columns.
struct TemporalGraph {
  std::vector<EdgeEvent> events;
  std::size_t num_nodes = 0;
  RowMatrix node_feats;
  RowMatrix edge_feats;
  // original_ids[dense_id] is the id as it appeared in the input file.
  std::vector<std::uint64_t> original_ids;

  std::size_t node_dim() const { return static_cast<std::size_t>(node_feats.cols()); }
  std::size_t edge_dim() const { return static_cast<std::size_t>(edge_feats.cols()); }
  Timestamp time_span() const;
};

enum class HeaderMode { kAuto, kPresent, kAbsent };

struct CsvLayout {
  HeaderMode header = HeaderMode::kAuto;
  // 0 = auto-detect ',' / ';' / '\t' / ' '.
  char delimiter = 0;
  // Column 4 is a label to be skipped. With an auto-detected header a column
  // named "label" / "state_label" turns this on.
  bool has_label = false;
  // Leading row-index column (DyGLib-style exports start with ",u,i,ts,...").
  // Auto-enabled when the header's first cell is empty.
  bool has_index_column = false;
};

TemporalGraph load_events(const std::filesystem::path& path,
                          const CsvLayout& layout = {});
TemporalGraph parse_events(std::string_view text, const CsvLayout& layout = {});

// Builds a graph from in-memory events: sorts stably by t, assigns edge_idx,
// and densely re-indexes ids if they have gaps. edge_feats rows follow the
// input order and are permuted alongside.
TemporalGraph make_graph(std::vector<EdgeEvent> events,
                         RowMatrix edge_feats = {});

// Rows "id,f1..fk" keyed by original id; missing nodes keep zero features.
void load_node_features(TemporalGraph& g, const std::filesystem::path& path);

void save_events_csv(const TemporalGraph& g, const std::filesystem::path& path);

enum class EvalMode { kTransductive, kInductive };

struct SplitSpec {
  std::size_t train_end = 0;
  std::size_t val_end = 0;
  std::vector<NodeId> inductive_nodes;  // sorted
  EvalMode mode = EvalMode::kTransductive;

  bool is_inductive(NodeId n) const;
};

SplitSpec chronological_split(const TemporalGraph& g, double train_frac = 0.70,
                              double val_frac = 0.15);

// Picks floor(fraction * |nodes seen in val/test|) nodes deterministically.
std::vector<NodeId> select_inductive_nodes(const TemporalGraph& g,
                                           const SplitSpec& split,
                                           double fraction,
                                           std::uint64_t seed);

// Train events with every event touching an inductive node removed
// (identity in transductive mode).
std::vector<EdgeEvent> training_stream(const TemporalGraph& g,
                                       const SplitSpec& split);

// True when an event in [train_end, val_end) or [val_end, end) is scored:
// always for transductive, only if it touches a masked node otherwise.
bool is_scored(const SplitSpec& split, const EdgeEvent& e);

// Sorted distinct destination ids of the whole stream.
std::vector<NodeId> destination_pool(const TemporalGraph& g);

std::vector<NodeId> sample_negative(std::span<const EdgeEvent> batch,
                                    std::span<const NodeId> dst_pool, Rng& rng);

}  // namespace cnen
