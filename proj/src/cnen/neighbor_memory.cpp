// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/neighbor_memory.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cnen/rng.hpp"

namespace cnen {
namespace {

constexpr char kImageMagic[4] = {'C', 'N', 'E', 'M'};
constexpr std::uint32_t kImageVersion = 1;

template <typename T>
void put(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<std::uint8_t>(
        static_cast<std::uint64_t>(value) >> (8 * i)));
}

template <typename T>
T get(const std::vector<std::uint8_t>& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw DataError("memory image truncated");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(in[pos + i]) << (8 * i);
  pos += sizeof(T);
  return static_cast<T>(v);
}

void put_table(std::vector<std::uint8_t>& out, const HashTableMemory& t) {
  put<std::uint64_t>(out, t.num_nodes());
  put<std::uint64_t>(out, t.width());
  put<std::uint64_t>(out, t.multiplier());
  for (NodeId s : t.raw()) put<std::uint32_t>(out, s);
}

void get_table(const std::vector<std::uint8_t>& in, std::size_t& pos,
               HashTableMemory& t) {
  const auto n = get<std::uint64_t>(in, pos);
  const auto m = get<std::uint64_t>(in, pos);
  const auto q = get<std::uint64_t>(in, pos);
  if (n != t.num_nodes() || m != t.width())
    throw DataError("memory image shape (" + std::to_string(n) + "x" +
                    std::to_string(m) + ") does not match memory (" +
                    std::to_string(t.num_nodes()) + "x" +
                    std::to_string(t.width()) + ")");
  if (q != t.multiplier())
    throw DataError("memory image hash multiplier does not match memory");
  for (auto& s : t.raw()) s = get<std::uint32_t>(in, pos);
}

template <typename InsertFn>
void for_each_link_insert(NodeId u, NodeId v, const NeighborSequence& seq_u,
                          const NeighborSequence& seq_v, UpdateFlags flags,
                          InsertFn&& insert) {
  insert(u, v);
  insert(v, u);
  if (flags.two_order) {
    for (std::size_t j = 1; j < seq_v.entries.size(); ++j)
      if (seq_v.entries[j].valid) insert(u, seq_v.entries[j].peer);
    for (std::size_t i = 1; i < seq_u.entries.size(); ++i)
      if (seq_u.entries[i].valid) insert(v, seq_u.entries[i].peer);
  }
  if (flags.neighbor_update) {
    for (std::size_t i = 1; i < seq_u.entries.size(); ++i)
      if (seq_u.entries[i].valid) insert(seq_u.entries[i].peer, v);
    for (std::size_t j = 1; j < seq_v.entries.size(); ++j)
      if (seq_v.entries[j].valid) insert(seq_v.entries[j].peer, u);
  }
}

}  // namespace

HashTableMemory::HashTableMemory(std::size_t num_nodes, std::size_t width,
                                 std::uint64_t multiplier)
    : n_(num_nodes), m_(width), q_(multiplier) {
  if (width < 1) throw ConfigError("hashtable width must be >= 1");
  if (multiplier == 0 || multiplier % 2 == 0)
    throw ConfigError("hash multiplier must be odd and positive");
  if (num_nodes >= std::numeric_limits<NodeId>::max())
    throw ConfigError("too many nodes for the sketch");
  q_mod_ = q_ % m_;
  table_.assign(n_ * m_, sentinel());
}

std::size_t HashTableMemory::co_count(NodeId a, NodeId b, MatchMode mode) const {
  const NodeId* ra = table_.data() + static_cast<std::size_t>(a) * m_;
  const NodeId* rb = table_.data() + static_cast<std::size_t>(b) * m_;
  std::size_t count = 0;
  if (mode == MatchMode::kLiteral) {
    for (std::size_t m = 0; m < m_; ++m) count += ra[m] == rb[m];
  } else {
    const NodeId empty = sentinel();
    for (std::size_t m = 0; m < m_; ++m) count += (ra[m] == rb[m]) & (ra[m] != empty);
  }
  return count;
}

CoNeighborPairCounts HashTableMemory::co_count_pair(NodeId a, NodeId b, NodeId peer,
                                                    MatchMode mode) const {
  const NodeId* ra = table_.data() + static_cast<std::size_t>(a) * m_;
  const NodeId* rb = table_.data() + static_cast<std::size_t>(b) * m_;
  const NodeId* rp = table_.data() + static_cast<std::size_t>(peer) * m_;
  std::size_t ca = 0, cb = 0;
  if (mode == MatchMode::kLiteral) {
    for (std::size_t m = 0; m < m_; ++m) {
      ca += ra[m] == rp[m];
      cb += rb[m] == rp[m];
    }
  } else {
    const NodeId empty = sentinel();
    for (std::size_t m = 0; m < m_; ++m) {
      const bool real = rp[m] != empty;
      ca += (ra[m] == rp[m]) & real;
      cb += (rb[m] == rp[m]) & real;
    }
  }
  return {ca, cb};
}

std::size_t HashTableMemory::co_count_empty_row(NodeId a, MatchMode mode) const {
  if (mode == MatchMode::kStrict) return 0;
  const NodeId* ra = table_.data() + static_cast<std::size_t>(a) * m_;
  const NodeId empty = sentinel();
  std::size_t count = 0;
  for (std::size_t m = 0; m < m_; ++m) count += ra[m] == empty;
  return count;
}

void HashTableMemory::reset() { std::fill(table_.begin(), table_.end(), sentinel()); }

bool HashTableMemory::audit() const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t s = 0; s < m_; ++s) {
      const NodeId v = table_[i * m_ + s];
      if (v == sentinel()) continue;
      if (v > sentinel() || slot_of(v) != s) return false;
    }
  return true;
}

TemporalDiverseMemory::TemporalDiverseMemory(std::size_t num_nodes,
                                             std::size_t long_width,
                                             std::uint64_t long_q)
    : long_(num_nodes, long_width, long_q) {}

TemporalDiverseMemory::TemporalDiverseMemory(std::size_t num_nodes,
                                             std::size_t long_width,
                                             std::uint64_t long_q,
                                             std::size_t short_width,
                                             std::uint64_t short_q)
    : long_(num_nodes, long_width, long_q),
      short_(std::in_place, num_nodes, short_width, short_q) {
  if (short_width >= long_width)
    throw ConfigError("short hashtable must be narrower than the long one");
  if (short_q == long_q)
    throw ConfigError("long and short tables need distinct hash multipliers");
}

void TemporalDiverseMemory::apply_link_update(NodeId u, NodeId v,
                                              const NeighborSequence& seq_u,
                                              const NeighborSequence& seq_v,
                                              UpdateFlags flags) {
  for_each_link_insert(u, v, seq_u, seq_v, flags, [this](NodeId owner, NodeId n) {
    long_.insert(owner, n);
    if (short_) short_->insert(owner, n);
  });
}

void TemporalDiverseMemory::reset() {
  long_.reset();
  if (short_) short_->reset();
}

void encode_side(const TemporalDiverseMemory& tdm, NodeId anchor, NodeId other,
                 const NeighborSequence& seq, MatchMode mode,
                 std::vector<CoNeighborFeature>& out) {
  out.resize(seq.entries.size());
  const auto& lt = tdm.long_table();
  for (std::size_t i = 0; i < seq.entries.size(); ++i) {
    const auto& e = seq.entries[i];
    CoNeighborFeature f;
    f.valid = e.valid;
    if (e.valid) {
      const auto cl = lt.co_count_pair(anchor, other, e.peer, mode);
      f.long_pair = {static_cast<std::uint32_t>(cl.with_a), static_cast<std::uint32_t>(cl.with_b)};
      if (tdm.has_short()) {
        const auto cs = tdm.short_table().co_count_pair(anchor, other, e.peer, mode);
        f.short_pair = {static_cast<std::uint32_t>(cs.with_a),
                        static_cast<std::uint32_t>(cs.with_b)};
      }
    } else {
      f.long_pair = {static_cast<std::uint32_t>(lt.co_count_empty_row(anchor, mode)),
                     static_cast<std::uint32_t>(lt.co_count_empty_row(other, mode))};
      if (tdm.has_short()) {
        const auto& st = tdm.short_table();
        f.short_pair = {static_cast<std::uint32_t>(st.co_count_empty_row(anchor, mode)),
                        static_cast<std::uint32_t>(st.co_count_empty_row(other, mode))};
      }
    }
    out[i] = f;
  }
}

CoNeighborEncoding co_encode_sequence(const TemporalDiverseMemory& tdm, NodeId u,
                                      NodeId v, const NeighborSequence& seq_u,
                                      const NeighborSequence& seq_v,
                                      MatchMode mode) {
  if (seq_u.t != seq_v.t)
    throw DataError("co-neighbor encoding: sequences sampled at different times");
  CoNeighborEncoding enc;
  encode_side(tdm, u, v, seq_u, mode, enc.u_side);
  encode_side(tdm, v, u, seq_v, mode, enc.v_side);
  return enc;
}

MemoryImage snapshot(const TemporalDiverseMemory& tdm) {
  MemoryImage img;
  const std::size_t slots =
      tdm.long_table().raw().size() + (tdm.has_short() ? tdm.short_table().raw().size() : 0);
  img.bytes.reserve(12 + 48 + slots * 4);
  img.bytes.insert(img.bytes.end(), std::begin(kImageMagic), std::end(kImageMagic));
  put<std::uint32_t>(img.bytes, kImageVersion);
  put<std::uint32_t>(img.bytes, tdm.has_short() ? 2 : 1);
  put_table(img.bytes, tdm.long_table());
  if (tdm.has_short()) put_table(img.bytes, tdm.short_table());
  return img;
}

void restore(TemporalDiverseMemory& tdm, const MemoryImage& image) {
  const auto& in = image.bytes;
  if (in.size() < 12 || std::memcmp(in.data(), kImageMagic, 4) != 0)
    throw DataError("not a memory image");
  std::size_t pos = 4;
  if (get<std::uint32_t>(in, pos) != kImageVersion)
    throw DataError("unsupported memory image version");
  const auto count = get<std::uint32_t>(in, pos);
  if (count != (tdm.has_short() ? 2u : 1u))
    throw DataError("memory image table count does not match memory");
  // Decode into a copy so a failed restore leaves the target untouched.
  TemporalDiverseMemory staged = tdm;
  get_table(in, pos, staged.long_table());
  if (staged.has_short()) get_table(in, pos, staged.short_table());
  if (pos != in.size()) throw DataError("trailing bytes in memory image");
  tdm = std::move(staged);
}

void write_image(const MemoryImage& image, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(image.bytes.data()),
            static_cast<std::streamsize>(image.bytes.size()));
}

MemoryImage read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  MemoryImage img;
  img.bytes.assign(std::istreambuf_iterator<char>(in), {});
  return img;
}

std::pair<std::uint64_t, std::uint64_t> draw_multipliers(std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x4a5));
  // Odd values below 2^20 keep q * id far from overflow.
  const auto draw = [&] { return 2 * rng.uniform_index(1u << 19) + 1; };
  const std::uint64_t ql = draw();
  std::uint64_t qs = draw();
  while (qs == ql) qs = draw();
  return {ql, qs};
}

}  // namespace cnen
