// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/neighbor_memory.hpp"

#include <array>
#include <filesystem>

#include <gtest/gtest.h>

#include "cnen/rng.hpp"

namespace cnen {
namespace {

NeighborSequence make_seq(NodeId anchor, double t, std::vector<NodeId> peers,
                          std::size_t len, NodeId sentinel) {
  NeighborSequence s;
  s.anchor = anchor;
  s.t = t;
  s.entries.assign(len, {sentinel, 0.0, kNoEdge, false});
  s.entries[0] = {anchor, 0.0, kNoEdge, true};
  for (std::size_t i = 0; i < peers.size(); ++i)
    s.entries[i + 1] = {peers[i], 1.0 + static_cast<double>(i), static_cast<EdgeIndex>(i), true};
  return s;
}

TEST(HashTableMemory, FreshTableIsAllSentinel) {
  HashTableMemory m(3, 4, 1);
  EXPECT_EQ(m.raw().size(), 12u);
  for (NodeId s : m.raw()) EXPECT_EQ(s, 3u);
  EXPECT_TRUE(m.audit());
}

TEST(HashTableMemory, BadParametersRejected) {
  EXPECT_THROW(HashTableMemory(3, 4, 4), ConfigError);
  EXPECT_THROW(HashTableMemory(3, 4, 0), ConfigError);
  EXPECT_THROW(HashTableMemory(3, 0, 1), ConfigError);
}

TEST(HashTableMemory, SlotArithmetic) {
  EXPECT_EQ(HashTableMemory(10, 8, 3).slot_of(5), 7u);
  EXPECT_EQ(HashTableMemory(10, 16, 1).slot_of(5), 5u);
  EXPECT_EQ(HashTableMemory(11, 10, 7).slot_of(10), 0u);
}

TEST(HashTableMemory, InsertPlacesIdInItsSlot) {
  HashTableMemory m(6, 4, 1);
  m.insert(0, 5);
  EXPECT_EQ(m.row(0)[1], 5u);
  EXPECT_TRUE(m.contains(0, 5));
  EXPECT_TRUE(m.audit());
}

TEST(HashTableMemory, CollisionOverwrites) {
  HashTableMemory m(10, 4, 1);
  m.insert(0, 1);
  m.insert(0, 5);
  EXPECT_EQ(m.row(0)[1], 5u);
  EXPECT_FALSE(m.contains(0, 1));
}

TEST(HashTableMemory, ReinsertIsIdempotent) {
  HashTableMemory m(10, 4, 3);
  m.insert(2, 7);
  const auto before = m.raw();
  m.insert(2, 7);
  EXPECT_EQ(m.raw(), before);
}

TEST(HashTableMemory, CoCountModes) {
  // With q = 1, M = 4: H_a = [., 5, ., 7], H_b = [., 5, 6, .]
  HashTableMemory m(8, 4, 1);
  m.insert(0, 5);
  m.insert(0, 7);
  m.insert(1, 5);
  m.insert(1, 6);
  EXPECT_EQ(m.co_count(0, 1, MatchMode::kStrict), 1u);
  EXPECT_EQ(m.co_count(0, 1, MatchMode::kLiteral), 2u);
  EXPECT_EQ(m.co_count(1, 0, MatchMode::kLiteral), 2u);
}

TEST(HashTableMemory, SelfComparisonIsWidthInLiteralMode) {
  HashTableMemory m(8, 6, 5);
  m.insert(3, 1);
  EXPECT_EQ(m.co_count(3, 3, MatchMode::kLiteral), 6u);
  EXPECT_EQ(m.co_count(3, 3, MatchMode::kStrict), 1u);
}

TEST(HashTableMemory, EmptyRowComparison) {
  HashTableMemory m(8, 6, 5);
  m.insert(3, 1);
  m.insert(3, 2);
  EXPECT_EQ(m.co_count_empty_row(3, MatchMode::kLiteral), 4u);
  EXPECT_EQ(m.co_count_empty_row(3, MatchMode::kStrict), 0u);
  EXPECT_EQ(m.co_count_empty_row(4, MatchMode::kLiteral), 6u);
}

TEST(HashTableMemory, RandomPropertiesHold) {
  Rng rng(8);
  HashTableMemory m(40, 16, 11);
  for (int i = 0; i < 2000; ++i)
    m.insert(static_cast<NodeId>(rng.uniform_index(40)), static_cast<NodeId>(rng.uniform_index(40)));
  EXPECT_TRUE(m.audit());
  for (NodeId a = 0; a < 40; ++a)
    for (NodeId b = 0; b < 40; ++b) {
      const auto lit = m.co_count(a, b, MatchMode::kLiteral);
      const auto strict = m.co_count(a, b, MatchMode::kStrict);
      EXPECT_EQ(lit, m.co_count(b, a, MatchMode::kLiteral));
      EXPECT_EQ(strict, m.co_count(b, a, MatchMode::kStrict));
      EXPECT_LE(strict, lit);
      EXPECT_LE(lit, 16u);
    }
}

TEST(TemporalDiverseMemory, ShortMustBeNarrowerWithOwnMultiplier) {
  EXPECT_THROW(TemporalDiverseMemory(4, 8, 3, 8, 5), ConfigError);
  EXPECT_THROW(TemporalDiverseMemory(4, 8, 3, 4, 3), ConfigError);
  TemporalDiverseMemory ok(4, 8, 3, 4, 5);
  EXPECT_TRUE(ok.has_short());
  EXPECT_FALSE(TemporalDiverseMemory(4, 8, 3).has_short());
}

TEST(ApplyLinkUpdate, FirstOrderOnly) {
  // u=0, v=1, a=2
  TemporalDiverseMemory m(3, 8, 1, 4, 3);
  const auto su = make_seq(0, 5, {}, 3, 3);
  const auto sv = make_seq(1, 5, {2}, 3, 3);
  m.apply_link_update(0, 1, su, sv, {false, false});
  for (const auto* t : {&m.long_table(), &m.short_table()}) {
    EXPECT_TRUE(t->contains(0, 1));
    EXPECT_TRUE(t->contains(1, 0));
    EXPECT_EQ(t->co_count_empty_row(0, MatchMode::kLiteral), t->width() - 1);
    EXPECT_EQ(t->co_count_empty_row(1, MatchMode::kLiteral), t->width() - 1);
    EXPECT_EQ(t->co_count_empty_row(2, MatchMode::kLiteral), t->width());
  }
}

TEST(ApplyLinkUpdate, TwoOrderAndNeighborRules) {
  // seq_u = [u], seq_v = [v, a]: 2-order puts a into H_u; the neighbor rule
  // puts u into H_a; H_v gets only u.
  TemporalDiverseMemory m(3, 8, 1, 4, 3);
  const auto su = make_seq(0, 5, {}, 3, 3);
  const auto sv = make_seq(1, 5, {2}, 3, 3);
  m.apply_link_update(0, 1, su, sv, {true, true});
  const auto& t = m.long_table();
  EXPECT_TRUE(t.contains(0, 1));
  EXPECT_TRUE(t.contains(0, 2));
  EXPECT_TRUE(t.contains(1, 0));
  EXPECT_EQ(t.co_count_empty_row(1, MatchMode::kLiteral), 7u);
  EXPECT_TRUE(t.contains(2, 0));
  EXPECT_FALSE(t.contains(2, 1));
  EXPECT_EQ(t.co_count_empty_row(2, MatchMode::kLiteral), 7u);
}

TEST(ApplyLinkUpdate, FlagsSelectRules) {
  const auto su = make_seq(0, 5, {3}, 3, 5);
  const auto sv = make_seq(1, 5, {2}, 3, 5);
  TemporalDiverseMemory only2(5, 16, 1);
  only2.apply_link_update(0, 1, su, sv, {true, false});
  EXPECT_TRUE(only2.long_table().contains(0, 2));
  EXPECT_TRUE(only2.long_table().contains(1, 3));
  EXPECT_FALSE(only2.long_table().contains(3, 1));
  TemporalDiverseMemory onlyn(5, 16, 1);
  onlyn.apply_link_update(0, 1, su, sv, {false, true});
  EXPECT_FALSE(onlyn.long_table().contains(0, 2));
  EXPECT_TRUE(onlyn.long_table().contains(3, 1));
  EXPECT_TRUE(onlyn.long_table().contains(2, 0));
}

TEST(ApplyLinkUpdate, TwoOrderInsertCanEvictDirectNeighbor) {
  // Width 4, q = 1: v = 1 and j = 5 share slot 1; the later 2-order insert wins.
  TemporalDiverseMemory m(6, 4, 1);
  const auto su = make_seq(0, 5, {}, 2, 6);
  const auto sv = make_seq(1, 5, {5}, 2, 6);
  m.apply_link_update(0, 1, su, sv, {true, false});
  EXPECT_TRUE(m.long_table().contains(0, 5));
  EXPECT_FALSE(m.long_table().contains(0, 1));
}

TEST(ApplyLinkUpdate, OrderOfLinksMattersUnderCollision) {
  const auto run = [](bool reversed) {
    TemporalDiverseMemory m(6, 4, 1);
    const auto s0 = make_seq(0, 1, {}, 1, 6);
    const auto s1 = make_seq(1, 1, {}, 1, 6);
    const auto s5 = make_seq(5, 1, {}, 1, 6);
    if (!reversed) {
      m.apply_link_update(0, 1, s0, s1, {});
      m.apply_link_update(0, 5, s0, s5, {});
    } else {
      m.apply_link_update(0, 5, s0, s5, {});
      m.apply_link_update(0, 1, s0, s1, {});
    }
    return m;
  };
  EXPECT_FALSE(run(false) == run(true));
  EXPECT_TRUE(run(false).long_table().contains(0, 5));
  EXPECT_TRUE(run(true).long_table().contains(0, 1));
}

TEST(ApplyLinkUpdate, ShortTableForgetsEarlyPhase) {
  // Phase 1 links node 0 to ids 1..3, phase 2 to ids 5..7; in a width-4
  // short table with q = 1 the later ids overwrite slots 1..3.
  TemporalDiverseMemory m(9, 8, 1, 4, 5);
  const auto link = [&](NodeId v) {
    m.apply_link_update(0, v, make_seq(0, 1, {}, 1, 9), make_seq(v, 1, {}, 1, 9), {});
  };
  for (NodeId v : {1, 2, 3}) link(v);
  for (NodeId v : {5, 6, 7}) link(v);
  const auto& st = m.short_table();
  for (NodeId v : {1, 2, 3}) {
    if (st.slot_of(v) == st.slot_of(5) || st.slot_of(v) == st.slot_of(6) ||
        st.slot_of(v) == st.slot_of(7))
      EXPECT_FALSE(st.contains(0, v)) << v;
  }
  for (NodeId v : {1, 2, 3, 5, 6, 7}) EXPECT_TRUE(m.long_table().contains(0, v));
}

TEST(CoEncodeSequence, WorkedExample) {
  // u=0, v=1, a=2; rows built with q=1, M=8 so that V(u,v)=5, V(u,a)=4,
  // V(v,a)=1 and no slot is empty.
  const std::size_t M = 8;
  TemporalDiverseMemory tdm(64, M, 1);
  auto& t = tdm.long_table();
  for (NodeId x : {8, 9, 10, 11, 12, 13, 14, 15}) t.insert(0, x);
  for (NodeId x : {8, 9, 10, 11, 12, 21, 22, 23}) t.insert(1, x);
  for (NodeId x : {16, 17, 18, 19, 12, 13, 14, 15}) t.insert(2, x);
  ASSERT_EQ(t.co_count(0, 1, MatchMode::kLiteral), 5u);
  ASSERT_EQ(t.co_count(0, 2, MatchMode::kLiteral), 4u);
  ASSERT_EQ(t.co_count(1, 2, MatchMode::kLiteral), 1u);

  const auto su = make_seq(0, 3.0, {2, 2}, 3, 64);
  const auto sv = make_seq(1, 3.0, {2, 0}, 3, 64);
  const auto enc = co_encode_sequence(tdm, 0, 1, su, sv, MatchMode::kLiteral);
  const auto pairs = [](const std::vector<CoNeighborFeature>& f) {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (const auto& x : f) out.emplace_back(x.long_pair.to_anchor, x.long_pair.to_other);
    return out;
  };
  using P = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  EXPECT_EQ(pairs(enc.u_side), (P{{8, 5}, {4, 1}, {4, 1}}));
  EXPECT_EQ(pairs(enc.v_side), (P{{8, 5}, {1, 4}, {5, 8}}));
}

TEST(CoEncodeSequence, EmptyMemoryStrictIsZeroOffSelf) {
  TemporalDiverseMemory tdm(4, 8, 1, 4, 3);
  tdm.long_table().insert(0, 2);
  tdm.short_table().insert(0, 2);
  const auto su = make_seq(0, 1, {2}, 4, 4);
  const auto sv = make_seq(1, 1, {}, 4, 4);
  const auto enc = co_encode_sequence(tdm, 0, 1, su, sv, MatchMode::kStrict);
  EXPECT_EQ(enc.u_side[0].long_pair.to_anchor, 1u);  // self: u's own stored id
  for (std::size_t i = 1; i < 4; ++i) {
    EXPECT_EQ(enc.u_side[i].long_pair, (CoNeighborPair{0, 0}));
    EXPECT_EQ(enc.v_side[i].short_pair, (CoNeighborPair{0, 0}));
  }
}

TEST(CoEncodeSequence, PaddingComparesAgainstEmptyRow) {
  TemporalDiverseMemory tdm(4, 8, 1);
  tdm.long_table().insert(0, 2);
  const auto su = make_seq(0, 1, {}, 2, 4);
  const auto sv = make_seq(1, 1, {}, 2, 4);
  const auto enc = co_encode_sequence(tdm, 0, 1, su, sv, MatchMode::kLiteral);
  EXPECT_FALSE(enc.u_side[1].valid);
  EXPECT_EQ(enc.u_side[1].long_pair, (CoNeighborPair{7, 8}));
  const auto strict = co_encode_sequence(tdm, 0, 1, su, sv, MatchMode::kStrict);
  EXPECT_EQ(strict.u_side[1].long_pair, (CoNeighborPair{0, 0}));
}

TEST(CoEncodeSequence, TimestampMismatchRejected) {
  TemporalDiverseMemory tdm(4, 8, 1);
  EXPECT_THROW(co_encode_sequence(tdm, 0, 1, make_seq(0, 1, {}, 2, 4),
                                  make_seq(1, 2, {}, 2, 4), MatchMode::kStrict),
               DataError);
}

TEST(CoEncodeSequence, BatchedEqualsOneAtATime) {
  Rng rng(12);
  const NodeId n = 50;
  TemporalDiverseMemory tdm(n, 16, 7, 4, 9);
  for (int i = 0; i < 3000; ++i) {
    const auto a = static_cast<NodeId>(rng.uniform_index(n));
    const auto b = static_cast<NodeId>(rng.uniform_index(n));
    tdm.long_table().insert(a, b);
    tdm.short_table().insert(a, b);
  }
  std::vector<std::array<NodeId, 2>> links;
  std::vector<NeighborSequence> su, sv;
  for (int k = 0; k < 200; ++k) {
    const auto u = static_cast<NodeId>(rng.uniform_index(n));
    const auto v = static_cast<NodeId>(rng.uniform_index(n));
    links.push_back({u, v});
    su.push_back(make_seq(u, 9, {static_cast<NodeId>(rng.uniform_index(n))}, 4, n));
    sv.push_back(make_seq(v, 9, {static_cast<NodeId>(rng.uniform_index(n))}, 4, n));
  }
  std::vector<CoNeighborEncoding> batched;
  for (int k = 0; k < 200; ++k)
    batched.push_back(co_encode_sequence(tdm, links[k][0], links[k][1], su[k], sv[k],
                                         MatchMode::kLiteral));
  for (int k = 199; k >= 0; --k) {
    const auto one = co_encode_sequence(tdm, links[k][0], links[k][1], su[k], sv[k],
                                        MatchMode::kLiteral);
    EXPECT_EQ(one.u_side, batched[k].u_side);
    EXPECT_EQ(one.v_side, batched[k].v_side);
  }
}

TEST(MemoryImage, SnapshotMutateRestore) {
  TemporalDiverseMemory tdm(10, 8, 3, 4, 5);
  tdm.long_table().insert(1, 2);
  tdm.short_table().insert(1, 2);
  const auto before = tdm;
  const auto img = snapshot(tdm);
  tdm.long_table().insert(1, 3);
  tdm.short_table().insert(4, 1);
  restore(tdm, img);
  EXPECT_TRUE(tdm == before);
  EXPECT_EQ(snapshot(tdm), img);
}

TEST(MemoryImage, ShapeMismatchRejectedAndTargetUntouched) {
  TemporalDiverseMemory a(10, 8, 3, 4, 5);
  TemporalDiverseMemory b(11, 8, 3, 4, 5);
  TemporalDiverseMemory c(10, 16, 3, 4, 5);
  TemporalDiverseMemory d(10, 8, 3);
  TemporalDiverseMemory e(10, 8, 7, 4, 5);
  b.long_table().insert(0, 1);
  const auto b_before = b;
  const auto img = snapshot(a);
  EXPECT_THROW(restore(b, img), DataError);
  EXPECT_TRUE(b == b_before);
  EXPECT_THROW(restore(c, img), DataError);
  EXPECT_THROW(restore(d, img), DataError);
  EXPECT_THROW(restore(e, img), DataError);
  auto bad = img;
  bad.bytes[0] = 'X';
  EXPECT_THROW(restore(a, bad), DataError);
  bad = img;
  bad.bytes.pop_back();
  EXPECT_THROW(restore(a, bad), DataError);
}

TEST(MemoryImage, RandomRoundTrips) {
  Rng rng(77);
  TemporalDiverseMemory tdm(30, 16, 5, 4, 9);
  for (int op = 0; op < 1000; ++op) {
    const auto a = static_cast<NodeId>(rng.uniform_index(30));
    const auto b = static_cast<NodeId>(rng.uniform_index(30));
    tdm.long_table().insert(a, b);
    if (op % 3 == 0) tdm.short_table().insert(b, a);
    if (op % 50 == 0) {
      const auto copy = tdm;
      const auto img = snapshot(tdm);
      TemporalDiverseMemory other(30, 16, 5, 4, 9);
      restore(other, img);
      EXPECT_TRUE(other == copy);
    }
  }
}

TEST(MemoryImage, FileRoundTrip) {
  TemporalDiverseMemory tdm(5, 4, 1);
  tdm.long_table().insert(2, 3);
  const auto path = std::filesystem::temp_directory_path() / "cnen_mem.bin";
  write_image(snapshot(tdm), path);
  const auto img = read_image(path);
  std::filesystem::remove(path);
  TemporalDiverseMemory other(5, 4, 1);
  restore(other, img);
  EXPECT_TRUE(other == tdm);
}

TEST(DrawMultipliers, DistinctOddAndSeeded) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto [a, b] = draw_multipliers(s);
    EXPECT_EQ(a % 2, 1u);
    EXPECT_EQ(b % 2, 1u);
    EXPECT_NE(a, b);
    EXPECT_EQ(draw_multipliers(s), std::make_pair(a, b));
  }
}

}  // namespace
}  // namespace cnen
