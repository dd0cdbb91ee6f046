// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "cnen/features.hpp"
#include "cnen/harness.hpp"
#include "cnen/synthetic.hpp"

namespace cnen {
namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double best_of(std::size_t repeats, Fn&& fn) {
  double best = std::numeric_limits<double>::infinity();
  fn();  // untimed warm-up: caches, page faults, lazy allocations
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    const auto start = Clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double>(Clock::now() - start).count());
  }
  return best;
}

struct Workload {
  std::vector<EdgeEvent> batch;
  std::vector<NodeId> negs;
  std::vector<NeighborSequence> src, dst, neg;
};

RunConfig bench_config(const BenchOptions& o, std::size_t width, std::size_t seq_len) {
  RunConfig c;
  c.seed = o.seed;
  c.long_size = width;
  c.short_size = std::max<std::size_t>(1, width / 4);
  c.ablation.no_td = width < 2;
  c.seq_len = seq_len;
  c.hidden = c.time_dim = c.out_dim = o.hidden;
  c.batch_size = o.batch_size;
  return c;
}

// Replays everything except the last batch, then samples that batch's
// sequences from the resulting state.
Workload prepare(Harness& h, const TemporalGraph& g, const BenchOptions& o) {
  const std::span<const EdgeEvent> all(g.events);
  const std::size_t b = std::min(o.batch_size, all.size());
  h.reset_stream();
  h.replay(all.first(all.size() - b));
  Workload w;
  w.batch.assign(all.end() - static_cast<std::ptrdiff_t>(b), all.end());
  Rng rng(derive_seed(o.seed, 7));
  const auto pool = destination_pool(g);
  w.negs = sample_negative(w.batch, pool, rng);
  const auto& hist = h.state().history;
  const auto len = h.config().seq_len;
  for (std::size_t k = 0; k < b; ++k) {
    const auto& e = w.batch[k];
    w.src.push_back(hist.recent_sequence(e.src, e.t, len));
    w.dst.push_back(hist.recent_sequence(e.dst, e.t, len));
    w.neg.push_back(hist.recent_sequence(w.negs[k], e.t, len));
  }
  return w;
}

double time_structure(const Harness& h, const Workload& w, const BenchOptions& o) {
  std::vector<CoNeighborFeature> out;
  const auto& mem = h.state().memory;
  const auto mode = h.config().matching;
  volatile std::uint32_t sink = 0;
  return best_of(o.repeats, [&] {
    std::uint32_t acc = 0;
    for (std::size_t k = 0; k < w.batch.size(); ++k) {
      const auto& e = w.batch[k];
      encode_side(mem, e.src, e.dst, w.src[k], mode, out);
      acc += out.back().long_pair.to_anchor;
      encode_side(mem, e.dst, e.src, w.dst[k], mode, out);
      acc += out.back().long_pair.to_anchor;
      encode_side(mem, e.src, w.negs[k], w.src[k], mode, out);
      acc += out.back().long_pair.to_anchor;
      encode_side(mem, w.negs[k], e.src, w.neg[k], mode, out);
      acc += out.back().long_pair.to_anchor;
    }
    sink = sink + acc;
  });
}

double time_forward(Harness& h, const TemporalGraph& g, const Workload& w,
                    const BenchOptions& o) {
  const auto& cfg = h.config();
  const FeatureContext ctx{&g, &h.state().memory, cfg.matching, true};
  std::vector<CoNeighborFeature> scratch;
  LinkBatch lb;
  volatile double sink = 0.0;
  return best_of(o.repeats, [&] {
    lb.sequences.resize(4 * w.batch.size(), cfg.seq_len, h.params().dims);
    lb.positive.clear();
    lb.negative.clear();
    for (std::size_t k = 0; k < w.batch.size(); ++k) {
      const auto& e = w.batch[k];
      const std::size_t s = 4 * k;
      fill_sequence(lb.sequences, s, ctx, e.src, e.dst, w.src[k], scratch);
      fill_sequence(lb.sequences, s + 1, ctx, e.dst, e.src, w.dst[k], scratch);
      fill_sequence(lb.sequences, s + 2, ctx, e.src, w.negs[k], w.src[k], scratch);
      fill_sequence(lb.sequences, s + 3, ctx, w.negs[k], e.src, w.neg[k], scratch);
      lb.positive.emplace_back(s, s + 1);
      lb.negative.emplace_back(s + 2, s + 3);
    }
    sink = sink + forward(h.params(), lb, ForwardOptions{}, nullptr).loss;
  });
}

nlohmann::json series_json(const ScalingSeries& s) {
  return {{"x", s.x},
          {"seconds", s.seconds},
          {"slope", s.slope},
          {"doubling_ratio", s.doubling_ratio()}};
}

}  // namespace

double ScalingSeries::doubling_ratio() const { return std::exp2(slope); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw ConfigError("slope fit needs at least two paired points");
  double mx = 0, my = 0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw ConfigError("slope fit needs positive values");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw ConfigError("slope fit needs distinct x values");
  return sxy / sxx;
}

nlohmann::json BenchReport::to_json() const {
  return {{"structure_vs_width", series_json(structure_vs_width)},
          {"structure_vs_seq_len", series_json(structure_vs_seq_len)},
          {"forward_vs_seq_len", series_json(forward_vs_seq_len)},
          {"trivial_run_seconds", trivial_run_seconds}};
}

BenchReport run_bench(const BenchOptions& o) {
  if (o.widths.size() < 2 || o.seq_lens.size() < 2)
    throw ConfigError("bench needs at least two widths and two sequence lengths");
  const auto g = random_stream(o.num_nodes, o.num_events, o.seed);
  BenchReport rep;

  for (std::size_t m : o.widths) {
    Harness h(g, bench_config(o, m, o.fixed_seq_len));
    const auto w = prepare(h, g, o);
    rep.structure_vs_width.x.push_back(static_cast<double>(m));
    rep.structure_vs_width.seconds.push_back(time_structure(h, w, o));
  }
  for (std::size_t len : o.seq_lens) {
    Harness h(g, bench_config(o, o.fixed_width, len));
    const auto w = prepare(h, g, o);
    rep.structure_vs_seq_len.x.push_back(static_cast<double>(len));
    rep.structure_vs_seq_len.seconds.push_back(time_structure(h, w, o));
    rep.forward_vs_seq_len.x.push_back(static_cast<double>(len));
    rep.forward_vs_seq_len.seconds.push_back(time_forward(h, g, w, o));
  }
  for (auto* s : {&rep.structure_vs_width, &rep.structure_vs_seq_len,
                  &rep.forward_vs_seq_len})
    s->slope = loglog_slope(s->x, s->seconds);

  {
    const auto toy = random_stream(20, 200, o.seed);
    RunConfig c = bench_config(o, 1, 1);
    c.epochs = 1;
    c.batch_size = 50;
    const auto start = Clock::now();
    Harness h(toy, c);
    h.run("toy");
    rep.trivial_run_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  }
  return rep;
}

}  // namespace cnen
