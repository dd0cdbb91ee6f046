// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/synthetic.hpp"

#include <algorithm>
#include <deque>

namespace cnen {
namespace {

void touch(std::deque<NodeId>& recent, NodeId peer, std::size_t window) {
  const auto it = std::find(recent.begin(), recent.end(), peer);
  if (it != recent.end()) recent.erase(it);
  recent.push_back(peer);
  if (recent.size() > window) recent.pop_front();
}

}  // namespace

TemporalGraph triadic_closure_stream(const TriadicOptions& opts) {
  if (opts.num_nodes < 3) throw ConfigError("triadic stream needs at least 3 nodes");
  if (opts.window < 1) throw ConfigError("window must be >= 1");
  Rng rng(opts.seed);
  const auto n = opts.num_nodes;
  std::vector<std::deque<NodeId>> nbrs(n);
  std::vector<std::uint32_t> weight(n, 0);
  std::vector<NodeId> touched;
  std::vector<EdgeEvent> events;
  events.reserve(opts.num_events);

  const auto uniform_other = [&](NodeId u) {
    NodeId v;
    do v = static_cast<NodeId>(rng.uniform_index(n));
    while (v == u);
    return v;
  };

  for (std::size_t k = 0; k < opts.num_events; ++k) {
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    NodeId v = u;
    if (rng.uniform_real() < opts.closure_prob) {
      touched.clear();
      std::uint64_t total = 0;
      for (NodeId w : nbrs[u])
        for (NodeId x : nbrs[w]) {
          if (x == u) continue;
          if (weight[x]++ == 0) touched.push_back(x);
          ++total;
        }
      if (total > 0) {
        // touched is in first-seen order, so the draw is reproducible.
        std::uint64_t pick = rng.uniform_index(total);
        for (NodeId x : touched) {
          if (pick < weight[x]) {
            v = x;
            break;
          }
          pick -= weight[x];
        }
      }
      for (NodeId x : touched) weight[x] = 0;
    }
    if (v == u) v = uniform_other(u);
    touch(nbrs[u], v, opts.window);
    touch(nbrs[v], u, opts.window);
    events.push_back({u, v, static_cast<Timestamp>(k + 1), 0});
  }
  auto g = make_graph(std::move(events));
  return g;
}

TemporalGraph random_stream(std::size_t num_nodes, std::size_t num_events,
                            std::uint64_t seed) {
  if (num_nodes < 2) throw ConfigError("random stream needs at least 2 nodes");
  Rng rng(seed);
  std::vector<EdgeEvent> events(num_events);
  for (std::size_t k = 0; k < num_events; ++k) {
    const auto u = static_cast<NodeId>(rng.uniform_index(num_nodes));
    auto v = static_cast<NodeId>(rng.uniform_index(num_nodes - 1));
    if (v >= u) ++v;
    events[k] = {u, v, static_cast<Timestamp>(k + 1), 0};
  }
  return make_graph(std::move(events));
}

}  // namespace cnen
