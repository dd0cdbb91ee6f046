// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnen/adam.hpp"
#include "cnen/encoder.hpp"
#include "cnen/event_log.hpp"
#include "cnen/features.hpp"
#include "cnen/history.hpp"
#include "cnen/neighbor_memory.hpp"
#include "cnen/run_config.hpp"

namespace cnen {

enum class Phase { kValidation, kTest };

struct Metrics {
  double ap = 0.0;
  double auc = 0.0;
  double loss = 0.0;
  std::size_t scored = 0;  // positive events scored
  double wall_time = 0.0;
};

// Memory sketches plus interaction histories: everything that evolves with
// the stream and is independent of the model parameters.
struct StreamState {
  TemporalDiverseMemory memory;
  HistoryStore history;

  struct Image {
    MemoryImage memory;
    HistoryStore history;
  };
  Image snapshot() const { return {cnen::snapshot(memory), history}; }
  void restore(const Image& img) {
    cnen::restore(memory, img.memory);
    history = img.history;
  }
  void reset() {
    memory.reset();
    history.clear();
  }
};

StreamState make_stream_state(const TemporalGraph& g, const RunConfig& cfg);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  Metrics val;
};

struct RunResult {
  std::string dataset;
  RunConfig config;
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch = 0;
  Metrics test;
  std::size_t causality_violations = 0;
  double wall_time = 0.0;

  double best_val_ap() const;
  nlohmann::json to_json() const;
};

class Harness {
 public:
  Harness(const TemporalGraph& g, const RunConfig& cfg);

  const RunConfig& config() const { return cfg_; }
  const SplitSpec& split() const { return split_; }
  std::span<const EdgeEvent> train_events() const { return train_events_; }
  std::span<const EdgeEvent> phase_events(Phase p) const;

  ModelParams& params() { return params_; }
  const ModelParams& params() const { return params_; }
  StreamState& state() { return state_; }
  const StreamState& state() const { return state_; }

  // Memories and histories back to the stream start.
  void reset_stream() { state_.reset(); }

  // One pass over the training stream with predict-then-update per batch.
  // Returns the mean batch loss. Resets the stream first.
  double train_epoch(std::size_t epoch);

  // Scores the phase with state continuing to evolve through it, then puts
  // the state back where it was. Expects the state positioned at the phase
  // start.
  Metrics evaluate(Phase phase);

  // Applies memory/history updates for events without scoring, using the
  // same batch boundaries as scoring would.
  void replay(std::span<const EdgeEvent> events);

  // Sequences and features for `events` (one negative each) against the
  // current state. The state is not modified.
  LinkBatch encode_batch(std::span<const EdgeEvent> events,
                         std::span<const NodeId> negs);

  // Positions the state at the start of `phase` from a fresh stream.
  void position_at(Phase phase);

  using EpochCallback = std::function<void(const EpochRecord&)>;
  RunResult run(const std::string& dataset, const EpochCallback& on_epoch = {});

  std::size_t causality_violations() const { return violations_; }

 private:
  struct BatchSequences {
    std::vector<NeighborSequence> src, dst, neg;
  };
  void sample_sequences(std::span<const EdgeEvent> batch,
                        std::span<const NodeId> negs, BatchSequences& out);
  void audit(const NeighborSequence& seq, const EdgeEvent& e);
  // Encodes (u|v), (v|u), (u|n), (n|u) for the selected events.
  void build_link_batch(std::span<const EdgeEvent> batch,
                        const std::vector<std::size_t>& selected,
                        const BatchSequences& seqs, std::span<const NodeId> negs,
                        LinkBatch& out);
  void apply_updates(std::span<const EdgeEvent> batch, const BatchSequences& seqs);

  const TemporalGraph& g_;
  RunConfig cfg_;
  SplitSpec split_;
  std::vector<EdgeEvent> train_events_;
  std::vector<NodeId> dst_pool_;
  StreamState state_;
  ModelParams params_;
  AdamState adam_;
  std::size_t violations_ = 0;
  std::vector<CoNeighborFeature> scratch_;
};

struct SweepRow {
  double value = 0.0;
  RunResult result;
};

enum class SweepAxis { kHashtableSize, kSequenceLength };

// One full run per value with everything else (seed included) fixed. On the
// hashtable axis the long table takes the value and the short table
// min(short_size, value / 4), at least 1.
std::vector<SweepRow> run_sweep(const TemporalGraph& g, const RunConfig& base,
                                SweepAxis axis, std::span<const std::size_t> values,
                                const std::string& dataset);
nlohmann::json sweep_to_json(SweepAxis axis, const std::vector<SweepRow>& rows);

}  // namespace cnen
