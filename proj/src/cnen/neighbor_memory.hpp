// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "cnen/history.hpp"
#include "cnen/types.hpp"

namespace cnen {

// kLiteral counts every slot where the two rows agree, empty slots
// included, so a node compared with itself reads M. kStrict only counts slots
// holding the same real node id.
enum class MatchMode { kLiteral, kStrict };

struct CoNeighborPairCounts {
  std::size_t with_a = 0;
  std::size_t with_b = 0;
};

// Fixed-width per-node neighbor sketch. Row `i` holds up to M neighbor ids;
// a neighbor `a` can only live in slot (q * a) mod M, and a newer neighbor
// hashing to an occupied slot overwrites it. Empty slots hold the sentinel
// value num_nodes.
class HashTableMemory {
 public:
  HashTableMemory(std::size_t num_nodes, std::size_t width,
                  std::uint64_t multiplier);

  std::size_t slot_of(NodeId node) const {
    return static_cast<std::size_t>(((q_mod_) * (node % m_)) % m_);
  }

  void insert(NodeId owner, NodeId neighbor) {
    table_[static_cast<std::size_t>(owner) * m_ + slot_of(neighbor)] = neighbor;
  }

  std::size_t co_count(NodeId a, NodeId b, MatchMode mode) const;
  // (co_count(a, peer), co_count(b, peer)) in one pass over the peer row.
  CoNeighborPairCounts co_count_pair(NodeId a, NodeId b, NodeId peer, MatchMode mode) const;
  // Against a virtual row that is entirely empty (used for padding entries).
  std::size_t co_count_empty_row(NodeId a, MatchMode mode) const;

  std::span<const NodeId> row(NodeId n) const {
    return {table_.data() + static_cast<std::size_t>(n) * m_, m_};
  }
  bool contains(NodeId owner, NodeId neighbor) const {
    return row(owner)[slot_of(neighbor)] == neighbor;
  }

  std::size_t num_nodes() const { return n_; }
  std::size_t width() const { return m_; }
  std::uint64_t multiplier() const { return q_; }
  NodeId sentinel() const { return static_cast<NodeId>(n_); }

  void reset();
  // Every occupied slot holds a valid id that hashes to that slot.
  bool audit() const;

  const std::vector<NodeId>& raw() const { return table_; }
  std::vector<NodeId>& raw() { return table_; }

  friend bool operator==(const HashTableMemory&, const HashTableMemory&) = default;

 private:
  std::size_t n_;
  std::size_t m_;
  std::uint64_t q_;
  std::uint64_t q_mod_;
  std::vector<NodeId> table_;
};

struct UpdateFlags {
  bool two_order = true;
  bool neighbor_update = true;
};

// Long (wide, slow forgetting) and optional short (narrow, fast forgetting)
// sketches with independent hash multipliers. Without a short table the
// memory degenerates to the single-table variant.
class TemporalDiverseMemory {
 public:
  TemporalDiverseMemory(std::size_t num_nodes, std::size_t long_width,
                        std::uint64_t long_q);
  TemporalDiverseMemory(std::size_t num_nodes, std::size_t long_width,
                        std::uint64_t long_q, std::size_t short_width,
                        std::uint64_t short_q);

  const HashTableMemory& long_table() const { return long_; }
  HashTableMemory& long_table() { return long_; }
  bool has_short() const { return short_.has_value(); }
  const HashTableMemory& short_table() const { return *short_; }
  HashTableMemory& short_table() { return *short_; }
  std::size_t num_nodes() const { return long_.num_nodes(); }

  // 1-order, then 2-order, then neighbor updates, on both tables. Later
  // inserts win slot collisions.
  void apply_link_update(NodeId u, NodeId v, const NeighborSequence& seq_u,
                         const NeighborSequence& seq_v, UpdateFlags flags);

  void reset();

  friend bool operator==(const TemporalDiverseMemory&,
                         const TemporalDiverseMemory&) = default;

 private:
  HashTableMemory long_;
  std::optional<HashTableMemory> short_;
};

struct CoNeighborPair {
  std::uint32_t to_anchor = 0;
  std::uint32_t to_other = 0;
  friend bool operator==(const CoNeighborPair&, const CoNeighborPair&) = default;
};

struct CoNeighborFeature {
  CoNeighborPair long_pair;
  CoNeighborPair short_pair;  // zero when the memory has no short table
  bool valid = false;         // false for padding positions
  friend bool operator==(const CoNeighborFeature&, const CoNeighborFeature&) = default;
};

struct CoNeighborEncoding {
  std::vector<CoNeighborFeature> u_side;
  std::vector<CoNeighborFeature> v_side;
};

// Per position i of `seq`: (co_count(anchor, i), co_count(other, i)) for
// each horizon. Padding positions compare against an empty row.
void encode_side(const TemporalDiverseMemory& tdm, NodeId anchor, NodeId other,
                 const NeighborSequence& seq, MatchMode mode,
                 std::vector<CoNeighborFeature>& out);

CoNeighborEncoding co_encode_sequence(const TemporalDiverseMemory& tdm, NodeId u,
                                      NodeId v, const NeighborSequence& seq_u,
                                      const NeighborSequence& seq_v,
                                      MatchMode mode);

// Versioned binary image of every table. Layout (little endian):
//   "CNEM" | u32 version=1 | u32 table_count
//   per table: u64 num_nodes | u64 width | u64 multiplier | u32 slots[N*M]
struct MemoryImage {
  std::vector<std::uint8_t> bytes;
  friend bool operator==(const MemoryImage&, const MemoryImage&) = default;
};

MemoryImage snapshot(const TemporalDiverseMemory& tdm);
void restore(TemporalDiverseMemory& tdm, const MemoryImage& image);
void write_image(const MemoryImage& image, const std::filesystem::path& path);
MemoryImage read_image(const std::filesystem::path& path);

// Two distinct odd multipliers derived from a seed.
std::pair<std::uint64_t, std::uint64_t> draw_multipliers(std::uint64_t seed);

}  // namespace cnen
