// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/synthetic.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "cnen/bench.hpp"

namespace cnen {
namespace {

TEST(Synthetic, TriadicStreamIsSeededAndOrdered) {
  TriadicOptions o;
  o.num_nodes = 100;
  o.num_events = 2000;
  o.seed = 3;
  const auto a = triadic_closure_stream(o);
  const auto b = triadic_closure_stream(o);
  ASSERT_EQ(a.events.size(), 2000u);
  EXPECT_LE(a.num_nodes, 100u);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].src, b.events[i].src);
    EXPECT_EQ(a.events[i].dst, b.events[i].dst);
    EXPECT_EQ(a.events[i].edge_idx, static_cast<EdgeIndex>(i));
    if (i > 0) EXPECT_LE(a.events[i - 1].t, a.events[i].t);
  }
  o.seed = 4;
  const auto c = triadic_closure_stream(o);
  bool differs = false;
  for (std::size_t i = 0; i < c.events.size(); ++i)
    differs |= c.events[i].dst != a.events[i].dst;
  EXPECT_TRUE(differs);
}

TEST(Synthetic, TriadicStreamRepeatsNeighborhoods) {
  // Closure events reuse recent neighborhoods, so far more destinations
  // repeat within a node's window than under uniform choice.
  TriadicOptions o;
  o.num_nodes = 500;
  o.num_events = 5000;
  const auto tri = triadic_closure_stream(o);
  const auto rnd = random_stream(500, 5000, 0);
  const auto repeats = [](const TemporalGraph& g) {
    std::vector<std::vector<NodeId>> seen(g.num_nodes);
    std::size_t hits = 0;
    for (const auto& e : g.events) {
      for (NodeId x : seen[e.src])
        for (NodeId y : seen[e.dst]) hits += x == y;
      seen[e.src].push_back(e.dst);
      seen[e.dst].push_back(e.src);
    }
    return hits;
  };
  EXPECT_GT(repeats(tri), 3 * repeats(rnd));
}

TEST(Synthetic, RandomStreamHasNoSelfLoopsAndIsSeeded) {
  const auto a = random_stream(30, 500, 1);
  const auto b = random_stream(30, 500, 1);
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_NE(a.events[i].src, a.events[i].dst);
    EXPECT_EQ(a.events[i].dst, b.events[i].dst);
  }
}

TEST(Bench, LoglogSlope) {
  std::vector<double> x = {1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3.0 * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 2.0, 1e-12);
  ScalingSeries s;
  s.slope = 1.0;
  EXPECT_NEAR(s.doubling_ratio(), 2.0, 1e-12);
}

TEST(Bench, SmallRunProducesSeries) {
  BenchOptions o;
  o.seq_lens = {2, 4};
  o.widths = {8, 16};
  o.fixed_seq_len = 4;
  o.fixed_width = 8;
  o.num_nodes = 100;
  o.num_events = 1000;
  o.batch_size = 50;
  o.hidden = 4;
  o.repeats = 1;
  const auto r = run_bench(o);
  EXPECT_EQ(r.structure_vs_width.seconds.size(), 2u);
  EXPECT_EQ(r.structure_vs_seq_len.seconds.size(), 2u);
  EXPECT_EQ(r.forward_vs_seq_len.seconds.size(), 2u);
  for (double s : r.forward_vs_seq_len.seconds) EXPECT_GT(s, 0.0);
  EXPECT_GT(r.trivial_run_seconds, 0.0);
  EXPECT_TRUE(r.to_json().contains("structure_vs_width"));
}

}  // namespace
}  // namespace cnen
