// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/oracle_check.hpp"

#include <chrono>
#include <set>

#include "cnen/exact_neighbor_log.hpp"
#include "cnen/neighbor_memory.hpp"
#include "cnen/rng.hpp"

namespace cnen {
namespace {

OracleStream random_oracle_stream(Rng& rng, const OracleCheckOptions& o) {
  OracleStream s;
  s.num_nodes = 2 + rng.uniform_index(o.max_nodes - 1);
  const std::size_t n_events = rng.uniform_index(o.max_events + 1);
  Timestamp t = 0.0;
  for (std::size_t k = 0; k < n_events; ++k) {
    // Repeated timestamps exercise the strict t_hat < t rule.
    if (rng.uniform_index(4) != 0) t += 1.0;
    const auto u = static_cast<NodeId>(rng.uniform_index(s.num_nodes));
    const auto v = static_cast<NodeId>(rng.uniform_index(s.num_nodes));
    s.events.push_back({u, v, t, static_cast<EdgeIndex>(k)});
  }
  return s;
}

nlohmann::json stream_json(const OracleStream& s, std::uint64_t q, std::size_t width) {
  auto ev = nlohmann::json::array();
  for (const auto& e : s.events) ev.push_back({e.src, e.dst, e.t});
  return {{"num_nodes", s.num_nodes}, {"width", width}, {"multiplier", q}, {"events", ev}};
}

bool injective(const HashTableMemory& t, const std::set<NodeId>& a,
               const std::set<NodeId>& b) {
  std::set<NodeId> ids(a);
  ids.insert(b.begin(), b.end());
  std::set<std::size_t> slots;
  for (NodeId x : ids)
    if (!slots.insert(t.slot_of(x)).second) return false;
  return true;
}

}  // namespace

nlohmann::json OracleCheckResult::to_json() const {
  return {{"streams", streams},
          {"events", events},
          {"pairs_checked", pairs_checked},
          {"injective_pairs", injective_pairs},
          {"mismatches", mismatches},
          {"collided_pairs", collided_pairs},
          {"degraded_pairs", degraded_pairs},
          {"mean_abs_error_collided", mean_abs_error_collided},
          {"max_abs_error", max_abs_error},
          {"counterexample", counterexample},
          {"passed", passed()},
          {"seconds", seconds}};
}

OracleCheckResult run_oracle_check(const OracleCheckOptions& o) {
  if (o.width < 1 || o.seq_len < 1 || o.max_nodes < 2)
    throw ConfigError("oracle check needs width >= 1, seq_len >= 1, max_nodes >= 2");
  const auto start = std::chrono::steady_clock::now();
  OracleCheckResult res;
  Rng rng(o.seed);
  double collided_error = 0.0;
  const std::size_t count = o.fixed_streams ? o.fixed_streams->size() : o.streams;

  for (std::size_t si = 0; si < count; ++si) {
    const OracleStream s =
        o.fixed_streams ? (*o.fixed_streams)[si] : random_oracle_stream(rng, o);
    const std::uint64_t q =
        o.multiplier ? o.multiplier : draw_multipliers(derive_seed(o.seed, si)).first;
    ExactNeighborLog exact(s.num_nodes);
    HistoryStore hist(s.num_nodes, static_cast<NodeId>(s.num_nodes));
    const UpdateFlags flags{o.two_order, o.neighbor_update};
    TemporalDiverseMemory tdm(s.num_nodes, o.width, q);

    const auto sweep = [&] {
      const auto& table = tdm.long_table();
      for (NodeId a = 0; a < s.num_nodes; ++a)
        for (NodeId b = a; b < s.num_nodes; ++b) {
          ++res.pairs_checked;
          const auto got = table.co_count(a, b, MatchMode::kStrict);
          const auto want = exact_common_neighbors(exact, a, b);
          const auto err = got > want ? got - want : want - got;
          if (injective(table, exact.stored(a), exact.stored(b))) {
            ++res.injective_pairs;
            if (err != 0) {
              if (res.mismatches++ == 0)
                res.counterexample = {{"stream", stream_json(s, q, o.width)},
                                      {"pair", {a, b}},
                                      {"sketch", got},
                                      {"exact", want}};
            }
          } else {
            ++res.collided_pairs;
            if (err) ++res.degraded_pairs;
            collided_error += static_cast<double>(err);
            res.max_abs_error = std::max(res.max_abs_error, err);
          }
        }
    };

    for (std::size_t k = 0; k < s.events.size(); ++k) {
      const auto& e = s.events[k];
      if (e.src >= s.num_nodes || e.dst >= s.num_nodes)
        throw DataError("oracle stream node id out of range");
      const auto seq_u = hist.recent_sequence(e.src, e.t, o.seq_len);
      const auto seq_v = hist.recent_sequence(e.dst, e.t, o.seq_len);
      tdm.apply_link_update(e.src, e.dst, seq_u, seq_v, flags);
      exact.apply_link_update(e.src, e.dst, seq_u, seq_v, o.two_order, o.neighbor_update);
      hist.record(e.src, e.dst, e.t, e.edge_idx);
      if (o.check_every && (k + 1) % o.check_every == 0) sweep();
    }
    sweep();
    res.events += s.events.size();
    ++res.streams;
  }
  if (res.collided_pairs)
    res.mean_abs_error_collided = collided_error / static_cast<double>(res.collided_pairs);
  res.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

OracleCheckOptions forced_collision_case() {
  OracleCheckOptions o;
  o.width = 4;
  o.multiplier = 1;
  o.seq_len = 1;
  o.check_every = 0;
  OracleStream s;
  s.num_nodes = 6;
  s.events = {{0, 1, 1.0, 0}, {2, 1, 2.0, 1}, {0, 5, 3.0, 2}};
  o.fixed_streams = std::vector<OracleStream>{s};
  return o;
}

}  // namespace cnen
