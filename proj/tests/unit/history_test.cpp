// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/history.hpp"

#include <algorithm>

#include <gtest/gtest.h>

#include "cnen/rng.hpp"

namespace cnen {
namespace {

std::vector<NodeId> peers(const NeighborSequence& s) {
  std::vector<NodeId> out;
  for (const auto& e : s.entries) out.push_back(e.peer);
  return out;
}

TEST(HistoryStore, RecordAppendsToBothEndpoints) {
  HistoryStore h(3, 3);
  h.record(0, 1, 5.0, 0);
  ASSERT_EQ(h.history(0).size(), 1u);
  EXPECT_EQ(h.history(0)[0].peer, 1u);
  EXPECT_EQ(h.history(0)[0].t, 5.0);
  EXPECT_EQ(h.history(0)[0].edge_idx, 0);
  ASSERT_EQ(h.history(1).size(), 1u);
  EXPECT_EQ(h.history(1)[0].peer, 0u);
  EXPECT_TRUE(h.history(2).empty());
}

TEST(HistoryStore, EqualTimestampsKeptInInputOrder) {
  HistoryStore h(3, 3);
  h.record(0, 1, 5.0, 0);
  h.record(0, 2, 5.0, 1);
  ASSERT_EQ(h.history(0).size(), 2u);
  EXPECT_EQ(h.history(0)[0].peer, 1u);
  EXPECT_EQ(h.history(0)[1].peer, 2u);
}

TEST(HistoryStore, OutOfOrderRejected) {
  HistoryStore h(2, 2);
  h.record(0, 1, 5.0, 0);
  EXPECT_THROW(h.record(0, 1, 4.0, 1), DataError);
}

TEST(HistoryStore, SelfLoopRecordedOnce) {
  HistoryStore h(2, 2);
  h.record(1, 1, 1.0, 0);
  EXPECT_EQ(h.history(1).size(), 1u);
}

TEST(RecentSequence, EmptyHistoryIsSelfThenPadding) {
  HistoryStore h(4, 4);
  const auto s = h.recent_sequence(2, 1.0, 3);
  EXPECT_EQ(peers(s), (std::vector<NodeId>{2, 4, 4}));
  EXPECT_TRUE(s.entries[0].valid);
  EXPECT_EQ(s.entries[0].delta_t, 0.0);
  EXPECT_FALSE(s.entries[1].valid);
  EXPECT_FALSE(s.entries[2].valid);
  EXPECT_EQ(s.entries[2].edge_idx, kNoEdge);
}

TEST(RecentSequence, RepeatedNeighbor) {
  // u = 0, a = 1
  HistoryStore h(2, 2);
  h.record(0, 1, 1.0, 0);
  h.record(0, 1, 2.0, 1);
  const auto s = h.recent_sequence(0, 3.0, 3);
  EXPECT_EQ(peers(s), (std::vector<NodeId>{0, 1, 1}));
  EXPECT_EQ(s.entries[1].delta_t, 1.0);
  EXPECT_EQ(s.entries[1].edge_idx, 1);
  EXPECT_EQ(s.entries[2].delta_t, 2.0);
}

TEST(RecentSequence, StrictlyEarlierOnly) {
  HistoryStore h(3, 3);
  h.record(0, 1, 1.0, 0);
  h.record(0, 2, 2.0, 1);
  const auto s = h.recent_sequence(0, 2.0, 3);
  EXPECT_EQ(peers(s), (std::vector<NodeId>{0, 1, 3}));
}

TEST(RecentSequence, KeepsMostRecentAgainstSortOracle) {
  Rng rng(3);
  HistoryStore h(20, 20);
  std::vector<Interaction> all;
  double t = 0;
  for (int i = 0; i < 10; ++i) {
    t += 1.0 + static_cast<double>(rng.uniform_index(3));
    const auto peer = static_cast<NodeId>(1 + rng.uniform_index(19));
    h.record(0, peer, t, i);
    all.push_back({peer, t, i});
  }
  const auto s = h.recent_sequence(0, t + 1.0, 4);
  std::sort(all.begin(), all.end(),
            [](const Interaction& a, const Interaction& b) { return a.edge_idx > b.edge_idx; });
  ASSERT_EQ(s.length(), 4u);
  EXPECT_EQ(s.valid_count(), 4u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(s.entries[k + 1].peer, all[k].peer);
    EXPECT_EQ(s.entries[k + 1].edge_idx, all[k].edge_idx);
    EXPECT_EQ(s.entries[k + 1].delta_t, t + 1.0 - all[k].t);
  }
}

TEST(RecentSequence, ReplayDeterminism) {
  const auto build = [] {
    HistoryStore h(5, 5);
    for (int i = 0; i < 20; ++i) h.record(i % 5, (i * 2 + 1) % 5, i, i);
    return h.recent_sequence(3, 15.5, 6);
  };
  EXPECT_EQ(peers(build()), peers(build()));
}

TEST(RecentSequence, ZeroLengthRejected) {
  HistoryStore h(1, 1);
  EXPECT_THROW(h.recent_sequence(0, 1.0, 0), ConfigError);
}

}  // namespace
}  // namespace cnen
