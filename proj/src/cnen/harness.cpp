// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "cnen/metrics.hpp"

namespace cnen {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

enum SeedStream : std::uint64_t {
  kInitStream = 1,
  kDropoutStream = 100,
  kTrainNegStream = 10000,
  kEvalNegStream = 20000,
};

}  // namespace

StreamState make_stream_state(const TemporalGraph& g, const RunConfig& cfg) {
  const auto [ql, qs] = cfg.multipliers();
  HistoryStore hist(g.num_nodes, static_cast<NodeId>(g.num_nodes));
  if (cfg.ablation.no_td)
    return {TemporalDiverseMemory(g.num_nodes, cfg.long_size, ql), std::move(hist)};
  return {TemporalDiverseMemory(g.num_nodes, cfg.long_size, ql, cfg.short_size, qs),
          std::move(hist)};
}

double RunResult::best_val_ap() const {
  for (const auto& e : epochs)
    if (e.epoch == best_epoch) return e.val.ap;
  return 0.0;
}

nlohmann::json RunResult::to_json() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["mode"] = to_string(config.mode);
  j["seed"] = config.seed;
  j["config"] = cnen::to_json(config);
  auto& ep = j["epoch"] = nlohmann::json::array();
  auto& loss = j["train_loss"] = nlohmann::json::array();
  auto& vap = j["val_ap"] = nlohmann::json::array();
  auto& vauc = j["val_auc"] = nlohmann::json::array();
  for (const auto& e : epochs) {
    ep.push_back(e.epoch);
    loss.push_back(e.train_loss);
    vap.push_back(e.val.ap);
    vauc.push_back(e.val.auc);
  }
  j["best_epoch"] = best_epoch;
  j["test_ap"] = test.ap;
  j["test_auc"] = test.auc;
  j["test_loss"] = test.loss;
  j["test_scored"] = test.scored;
  j["causality_violations"] = causality_violations;
  j["wall_time"] = wall_time;
  return j;
}

Harness::Harness(const TemporalGraph& g, const RunConfig& cfg)
    : g_(g),
      cfg_(cfg),
      state_(make_stream_state(g, cfg)),
      params_(ModelParams::initialize(cfg.model_dims(g),
                                      derive_seed(cfg.seed, kInitStream),
                                      g.time_span())),
      adam_(cfg.model_dims(g), AdamOptions{.lr = cfg.lr}) {
  cfg_.validate();
  if (g.events.empty()) throw DataError("event stream is empty");
  split_ = chronological_split(g, cfg.train_frac, cfg.val_frac);
  if (cfg.mode == EvalMode::kInductive) {
    split_.mode = EvalMode::kInductive;
    split_.inductive_nodes =
        select_inductive_nodes(g, split_, cfg.inductive_fraction, cfg.seed);
  }
  train_events_ = training_stream(g, split_);
  if (train_events_.empty()) throw DataError("training stream is empty");
  dst_pool_ = destination_pool(g);
}

std::span<const EdgeEvent> Harness::phase_events(Phase p) const {
  const std::span<const EdgeEvent> all(g_.events);
  if (p == Phase::kValidation)
    return all.subspan(split_.train_end, split_.val_end - split_.train_end);
  return all.subspan(split_.val_end);
}

void Harness::audit(const NeighborSequence& seq, const EdgeEvent& e) {
  for (std::size_t j = 1; j < seq.entries.size(); ++j) {
    const auto& s = seq.entries[j];
    if (!s.valid) continue;
    if (!(s.delta_t > 0.0) || s.edge_idx >= e.edge_idx) ++violations_;
  }
}

void Harness::sample_sequences(std::span<const EdgeEvent> batch,
                               std::span<const NodeId> negs, BatchSequences& out) {
  const auto& h = state_.history;
  out.src.resize(batch.size());
  out.dst.resize(batch.size());
  out.neg.resize(negs.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto& e = batch[k];
    out.src[k] = h.recent_sequence(e.src, e.t, cfg_.seq_len);
    out.dst[k] = h.recent_sequence(e.dst, e.t, cfg_.seq_len);
    audit(out.src[k], e);
    audit(out.dst[k], e);
    if (k < negs.size()) {
      out.neg[k] = h.recent_sequence(negs[k], e.t, cfg_.seq_len);
      audit(out.neg[k], e);
    }
  }
}

void Harness::build_link_batch(std::span<const EdgeEvent> batch,
                               const std::vector<std::size_t>& selected,
                               const BatchSequences& seqs,
                               std::span<const NodeId> negs, LinkBatch& out) {
  out.sequences.resize(4 * selected.size(), cfg_.seq_len, params_.dims);
  out.positive.clear();
  out.negative.clear();
  const FeatureContext ctx{&g_, &state_.memory, cfg_.matching, !cfg_.ablation.no_cne};
  std::size_t slot = 0;
  for (std::size_t k : selected) {
    const auto& e = batch[k];
    const NodeId n = negs[k];
    fill_sequence(out.sequences, slot + 0, ctx, e.src, e.dst, seqs.src[k], scratch_);
    fill_sequence(out.sequences, slot + 1, ctx, e.dst, e.src, seqs.dst[k], scratch_);
    fill_sequence(out.sequences, slot + 2, ctx, e.src, n, seqs.src[k], scratch_);
    fill_sequence(out.sequences, slot + 3, ctx, n, e.src, seqs.neg[k], scratch_);
    out.positive.emplace_back(slot, slot + 1);
    out.negative.emplace_back(slot + 2, slot + 3);
    slot += 4;
  }
}

void Harness::apply_updates(std::span<const EdgeEvent> batch,
                            const BatchSequences& seqs) {
  const UpdateFlags flags = cfg_.update_flags();
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const auto& e = batch[k];
    state_.memory.apply_link_update(e.src, e.dst, seqs.src[k], seqs.dst[k], flags);
  }
  for (const auto& e : batch) state_.history.record(e.src, e.dst, e.t, e.edge_idx);
}

double Harness::train_epoch(std::size_t epoch) {
  reset_stream();
  Rng neg_rng(derive_seed(cfg_.seed, kTrainNegStream + epoch));
  Rng drop_rng(derive_seed(cfg_.seed, kDropoutStream + epoch));
  const ForwardOptions opts{true, cfg_.dropout};
  const std::span<const EdgeEvent> stream(train_events_);
  BatchSequences seqs;
  LinkBatch lb;
  GradientTape tape;
  std::vector<std::size_t> all;
  double loss_sum = 0.0;
  std::size_t batches = 0;
  for (std::size_t start = 0; start < stream.size(); start += cfg_.batch_size) {
    const auto batch = stream.subspan(start, std::min(cfg_.batch_size, stream.size() - start));
    const auto negs = sample_negative(batch, dst_pool_, neg_rng);
    sample_sequences(batch, negs, seqs);
    all.resize(batch.size());
    for (std::size_t k = 0; k < batch.size(); ++k) all[k] = k;
    build_link_batch(batch, all, seqs, negs, lb);
    const auto res = forward(params_, lb, opts, &drop_rng, &tape);
    if (!std::isfinite(res.loss))
      throw NumericalError("non-finite training loss at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batches));
    adam_.step(params_, backward(tape));
    loss_sum += res.loss;
    ++batches;
    apply_updates(batch, seqs);
  }
  return loss_sum / static_cast<double>(batches);
}

void Harness::replay(std::span<const EdgeEvent> events) {
  BatchSequences seqs;
  for (std::size_t start = 0; start < events.size(); start += cfg_.batch_size) {
    const auto batch = events.subspan(start, std::min(cfg_.batch_size, events.size() - start));
    sample_sequences(batch, {}, seqs);
    apply_updates(batch, seqs);
  }
}

LinkBatch Harness::encode_batch(std::span<const EdgeEvent> events,
                               std::span<const NodeId> negs) {
  if (negs.size() != events.size())
    throw ConfigError("encode_batch needs one negative per event");
  BatchSequences seqs;
  sample_sequences(events, negs, seqs);
  std::vector<std::size_t> all(events.size());
  for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
  LinkBatch lb;
  build_link_batch(events, all, seqs, negs, lb);
  return lb;
}

void Harness::position_at(Phase phase) {
  reset_stream();
  replay(train_events_);
  if (phase == Phase::kTest) replay(phase_events(Phase::kValidation));
}

Metrics Harness::evaluate(Phase phase) {
  const auto start_time = Clock::now();
  const auto saved = state_.snapshot();
  const auto events = phase_events(phase);
  const std::uint64_t phase_id = phase == Phase::kValidation ? 0 : 1;
  std::vector<Rng> neg_rngs;
  for (std::size_t r = 0; r < cfg_.eval_negatives; ++r)
    neg_rngs.emplace_back(derive_seed(cfg_.seed, kEvalNegStream + 16 * phase_id + r));

  std::vector<double> scores;
  std::vector<int> labels;
  double loss_sum = 0.0;
  std::size_t loss_terms = 0;
  std::size_t scored = 0;
  BatchSequences seqs;
  LinkBatch lb;
  std::vector<std::size_t> selected;
  for (std::size_t start = 0; start < events.size(); start += cfg_.batch_size) {
    const auto batch = events.subspan(start, std::min(cfg_.batch_size, events.size() - start));
    selected.clear();
    for (std::size_t k = 0; k < batch.size(); ++k)
      if (is_scored(split_, batch[k])) selected.push_back(k);
    sample_sequences(batch, {}, seqs);
    for (std::size_t r = 0; r < cfg_.eval_negatives; ++r) {
      // Draw for the whole batch so negatives do not depend on the filter.
      const auto negs = sample_negative(batch, dst_pool_, neg_rngs[r]);
      if (selected.empty()) continue;
      seqs.neg.resize(batch.size());
      for (std::size_t k : selected) {
        seqs.neg[k] = state_.history.recent_sequence(negs[k], batch[k].t, cfg_.seq_len);
        audit(seqs.neg[k], batch[k]);
      }
      build_link_batch(batch, selected, seqs, negs, lb);
      const auto res = forward(params_, lb, ForwardOptions{}, nullptr);
      if (!std::isfinite(res.loss)) throw NumericalError("non-finite evaluation loss");
      if (r == 0)
        for (Eigen::Index i = 0; i < res.positive_prob.size(); ++i) {
          scores.push_back(res.positive_prob(i));
          labels.push_back(1);
        }
      for (Eigen::Index i = 0; i < res.negative_prob.size(); ++i) {
        scores.push_back(res.negative_prob(i));
        labels.push_back(0);
      }
      loss_sum += res.loss * static_cast<double>(selected.size());
      loss_terms += selected.size();
    }
    scored += selected.size();
    apply_updates(batch, seqs);
  }
  state_.restore(saved);
  if (scored == 0) throw DataError("no events to score in this phase");
  Metrics m;
  m.ap = average_precision(scores, labels);
  m.auc = auc_roc(scores, labels);
  m.loss = loss_sum / static_cast<double>(loss_terms);
  m.scored = scored;
  m.wall_time = seconds_since(start_time);
  return m;
}

RunResult Harness::run(const std::string& dataset, const EpochCallback& on_epoch) {
  const auto start_time = Clock::now();
  RunResult out;
  out.dataset = dataset;
  out.config = cfg_;
  ModelParams best = params_;
  double best_ap = -1.0;
  std::size_t since_best = 0;
  for (std::size_t epoch = 1; epoch <= cfg_.epochs; ++epoch) {
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = train_epoch(epoch);
    rec.val = evaluate(Phase::kValidation);
    out.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
    if (rec.val.ap > best_ap) {
      best_ap = rec.val.ap;
      best = params_;
      out.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg_.patience) {
      break;
    }
  }
  if (!out.epochs.empty()) params_ = best;
  position_at(Phase::kTest);
  out.test = evaluate(Phase::kTest);
  out.causality_violations = violations_;
  out.wall_time = seconds_since(start_time);
  return out;
}

std::vector<SweepRow> run_sweep(const TemporalGraph& g, const RunConfig& base,
                                SweepAxis axis, std::span<const std::size_t> values,
                                const std::string& dataset) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (std::size_t v : values) {
    RunConfig cfg = base;
    if (axis == SweepAxis::kHashtableSize) {
      cfg.long_size = v;
      cfg.short_size = std::max<std::size_t>(1, std::min(base.short_size, v / 4));
      if (cfg.long_size < 2) cfg.ablation.no_td = true;
    } else {
      cfg.seq_len = v;
    }
    Harness h(g, cfg);
    rows.push_back({static_cast<double>(v), h.run(dataset)});
  }
  return rows;
}

nlohmann::json sweep_to_json(SweepAxis axis, const std::vector<SweepRow>& rows) {
  nlohmann::json j;
  j["axis"] = axis == SweepAxis::kHashtableSize ? "hashtable_size" : "sequence_length";
  auto& arr = j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    arr.push_back({{"value", r.value},
                   {"config", cnen::to_json(r.result.config)},
                   {"best_epoch", r.result.best_epoch},
                   {"best_val_ap", r.result.best_val_ap()},
                   {"test_ap", r.result.test.ap},
                   {"test_auc", r.result.test.auc},
                   {"wall_time", r.result.wall_time}});
  }
  return j;
}

}  // namespace cnen
