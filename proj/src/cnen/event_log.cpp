// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/event_log.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace cnen {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '"'))
    s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_row(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  if (delim == ' ') {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
      if (i >= line.size()) break;
      std::size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
      cells.push_back(trim(line.substr(i, j - i)));
      i = j;
    }
    return cells;
  }
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      cells.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return cells;
}

char detect_delimiter(std::string_view line) {
  for (char c : {',', ';', '\t'})
    if (line.find(c) != std::string_view::npos) return c;
  return ' ';
}

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  // from_chars for double is available in libstdc++ 11.
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_id(std::string_view s, std::uint64_t& out) {
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  if (ec == std::errc() && ptr == end) return true;
  // Accept integral floats such as "12.0".
  double d = 0;
  if (!parse_double(s, d) || d < 0 || d != std::floor(d)) return false;
  out = static_cast<std::uint64_t>(d);
  return true;
}

std::string lower(std::string_view s) {
  std::string r(s);
  std::transform(r.begin(), r.end(), r.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return r;
}

struct RawRow {
  std::uint64_t src;
  std::uint64_t dst;
  double t;
};

}  // namespace

Timestamp TemporalGraph::time_span() const {
  if (events.empty()) return 0.0;
  return events.back().t - events.front().t;
}

TemporalGraph make_graph(std::vector<EdgeEvent> events, RowMatrix edge_feats) {
  if (edge_feats.rows() != 0 &&
      edge_feats.rows() != static_cast<Eigen::Index>(events.size()))
    throw DataError("edge feature rows do not match event count");

  std::vector<std::size_t> order(events.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return events[a].t < events[b].t;
  });

  TemporalGraph g;
  g.events.resize(events.size());
  g.edge_feats.resize(static_cast<Eigen::Index>(events.size()),
                      edge_feats.rows() ? edge_feats.cols() : 0);
  for (std::size_t i = 0; i < order.size(); ++i) {
    g.events[i] = events[order[i]];
    g.events[i].edge_idx = static_cast<EdgeIndex>(i);
    if (g.edge_feats.cols() > 0)
      g.edge_feats.row(static_cast<Eigen::Index>(i)) =
          edge_feats.row(static_cast<Eigen::Index>(order[i]));
  }

  // Dense re-index only when the id space has gaps.
  std::vector<std::uint64_t> ids;
  ids.reserve(g.events.size() * 2);
  for (const auto& e : g.events) {
    ids.push_back(e.src);
    ids.push_back(e.dst);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  const bool dense = ids.empty() || ids.back() + 1 == ids.size();
  if (dense) {
    g.num_nodes = ids.empty() ? 0 : ids.back() + 1;
    g.original_ids.resize(g.num_nodes);
    std::iota(g.original_ids.begin(), g.original_ids.end(), std::uint64_t{0});
  } else {
    std::unordered_map<std::uint64_t, NodeId> remap;
    remap.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
      remap.emplace(ids[i], static_cast<NodeId>(i));
    for (auto& e : g.events) {
      e.src = remap.at(e.src);
      e.dst = remap.at(e.dst);
    }
    g.num_nodes = ids.size();
    g.original_ids = std::move(ids);
  }
  if (g.num_nodes >= std::numeric_limits<NodeId>::max())
    throw DataError("too many nodes for 32-bit node ids");
  g.node_feats.resize(static_cast<Eigen::Index>(g.num_nodes), 0);
  return g;
}

TemporalGraph parse_events(std::string_view text, const CsvLayout& layout) {
  std::vector<RawRow> rows;
  std::vector<std::vector<double>> feats;
  std::optional<std::size_t> feat_dim;
  char delim = layout.delimiter;
  bool has_label = layout.has_label;
  bool has_index = layout.has_index_column;
  // DyGLib exports end with a redundant "idx" column.
  bool drop_last = false;
  bool first = true;
  std::size_t line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') {
      if (nl == text.size()) break;
      continue;
    }
    if (delim == 0) delim = detect_delimiter(line);
    auto cells = split_row(line, delim);
    if (drop_last && !cells.empty()) cells.pop_back();

    if (first) {
      first = false;
      bool header = layout.header == HeaderMode::kPresent;
      if (layout.header == HeaderMode::kAuto) {
        double tmp;
        std::size_t probe = (!cells.empty() && cells[0].empty()) ? 1 : 0;
        header = cells.size() <= probe || !parse_double(cells[probe], tmp);
      }
      if (header) {
        if (layout.header == HeaderMode::kAuto || layout.header == HeaderMode::kPresent) {
          if (!cells.empty() && cells[0].empty()) has_index = true;
          const std::size_t off = has_index ? 1 : 0;
          if (cells.size() > off + 3) {
            auto name = lower(cells[off + 3]);
            if (name.find("label") != std::string::npos || name == "state")
              has_label = true;
          }
          drop_last = cells.size() > off + 3 && lower(cells.back()) == "idx";
        }
        if (nl == text.size()) break;
        continue;
      }
    }

    const std::size_t off = has_index ? 1 : 0;
    if (cells.size() < off + 3)
      throw DataError("line " + std::to_string(line_no) +
                      ": expected at least src,dst,timestamp");
    RawRow r{};
    if (!parse_id(cells[off], r.src) || !parse_id(cells[off + 1], r.dst) ||
        !parse_double(cells[off + 2], r.t) || !std::isfinite(r.t) || r.t < 0)
      throw DataError("line " + std::to_string(line_no) + ": malformed row");
    const std::size_t feat_start = off + 3 + (has_label ? 1 : 0);
    if (has_label && cells.size() < feat_start)
      throw DataError("line " + std::to_string(line_no) + ": missing label column");
    const std::size_t k = cells.size() > feat_start ? cells.size() - feat_start : 0;
    if (!feat_dim) feat_dim = k;
    if (*feat_dim != k)
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(*feat_dim) + " edge features, found " +
                      std::to_string(k));
    std::vector<double> f(k);
    for (std::size_t j = 0; j < k; ++j)
      if (!parse_double(cells[feat_start + j], f[j]))
        throw DataError("line " + std::to_string(line_no) + ": bad feature value");
    rows.push_back(r);
    if (k) feats.push_back(std::move(f));
    if (nl == text.size()) break;
  }
  if (rows.empty()) throw DataError("empty input: no events");

  std::vector<EdgeEvent> events(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].src >= std::numeric_limits<NodeId>::max() ||
        rows[i].dst >= std::numeric_limits<NodeId>::max())
      throw DataError("node id out of range");
    events[i] = {static_cast<NodeId>(rows[i].src),
                 static_cast<NodeId>(rows[i].dst), rows[i].t, 0};
  }
  RowMatrix ef;
  if (feat_dim && *feat_dim > 0) {
    ef.resize(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(*feat_dim));
    for (std::size_t i = 0; i < feats.size(); ++i)
      for (std::size_t j = 0; j < *feat_dim; ++j)
        ef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = feats[i][j];
  }
  return make_graph(std::move(events), std::move(ef));
}

TemporalGraph load_events(const std::filesystem::path& path,
                          const CsvLayout& layout) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_events(ss.str(), layout);
}

void load_node_features(TemporalGraph& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  std::unordered_map<std::uint64_t, NodeId> dense;
  for (std::size_t i = 0; i < g.original_ids.size(); ++i)
    dense.emplace(g.original_ids[i], static_cast<NodeId>(i));
  std::string line;
  std::size_t line_no = 0;
  std::optional<std::size_t> dim;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line, detect_delimiter(line));
    std::uint64_t id;
    if (!parse_id(cells[0], id)) {
      if (line_no == 1) continue;  // header
      throw DataError("node features line " + std::to_string(line_no) + ": bad id");
    }
    const std::size_t k = cells.size() - 1;
    if (!dim) {
      dim = k;
      g.node_feats = RowMatrix::Zero(static_cast<Eigen::Index>(g.num_nodes),
                                     static_cast<Eigen::Index>(k));
    }
    if (*dim != k)
      throw DataError("node features line " + std::to_string(line_no) +
                      ": inconsistent arity");
    auto it = dense.find(id);
    if (it == dense.end()) continue;
    for (std::size_t j = 0; j < k; ++j) {
      double v;
      if (!parse_double(cells[j + 1], v))
        throw DataError("node features line " + std::to_string(line_no) +
                        ": bad value");
      g.node_feats(it->second, static_cast<Eigen::Index>(j)) = v;
    }
  }
}

void save_events_csv(const TemporalGraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out.precision(17);
  out << "src,dst,t";
  for (std::size_t j = 0; j < g.edge_dim(); ++j) out << ",f" << j;
  out << '\n';
  for (const auto& e : g.events) {
    out << g.original_ids[e.src] << ',' << g.original_ids[e.dst] << ',' << e.t;
    for (std::size_t j = 0; j < g.edge_dim(); ++j)
      out << ',' << g.edge_feats(e.edge_idx, static_cast<Eigen::Index>(j));
    out << '\n';
  }
}

bool SplitSpec::is_inductive(NodeId n) const {
  return std::binary_search(inductive_nodes.begin(), inductive_nodes.end(), n);
}

SplitSpec chronological_split(const TemporalGraph& g, double train_frac,
                              double val_frac) {
  if (!(train_frac > 0) || !(val_frac > 0) || train_frac + val_frac >= 1.0)
    throw ConfigError("split fractions must be positive and leave a test remainder");
  const std::size_t n = g.events.size();
  if (n < 3) throw DataError("insufficient data: need at least 3 events to split");
  SplitSpec s;
  // The small epsilon keeps 0.85 * 100 from flooring to 84.
  const auto nd = static_cast<double>(n);
  s.train_end = static_cast<std::size_t>(std::floor(train_frac * nd + 1e-9));
  s.val_end = static_cast<std::size_t>(std::floor((train_frac + val_frac) * nd + 1e-9));
  s.train_end = std::max<std::size_t>(s.train_end, 1);
  s.val_end = std::clamp(s.val_end, s.train_end, n);
  return s;
}

std::vector<NodeId> select_inductive_nodes(const TemporalGraph& g,
                                           const SplitSpec& split,
                                           double fraction,
                                           std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("inductive fraction must lie in (0, 1)");
  std::vector<NodeId> later;
  for (std::size_t i = split.train_end; i < g.events.size(); ++i) {
    later.push_back(g.events[i].src);
    later.push_back(g.events[i].dst);
  }
  std::sort(later.begin(), later.end());
  later.erase(std::unique(later.begin(), later.end()), later.end());
  const auto k = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(later.size())));
  if (k == 0) throw DataError("inductive mask is empty for this fraction");
  Rng rng(seed);
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + rng.uniform_index(later.size() - i);
    std::swap(later[i], later[j]);
  }
  std::vector<NodeId> chosen(later.begin(), later.begin() + static_cast<std::ptrdiff_t>(k));
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

std::vector<EdgeEvent> training_stream(const TemporalGraph& g,
                                       const SplitSpec& split) {
  std::vector<EdgeEvent> out;
  out.reserve(split.train_end);
  for (std::size_t i = 0; i < split.train_end; ++i) {
    const auto& e = g.events[i];
    if (split.mode == EvalMode::kInductive &&
        (split.is_inductive(e.src) || split.is_inductive(e.dst)))
      continue;
    out.push_back(e);
  }
  return out;
}

bool is_scored(const SplitSpec& split, const EdgeEvent& e) {
  if (split.mode == EvalMode::kTransductive) return true;
  return split.is_inductive(e.src) || split.is_inductive(e.dst);
}

std::vector<NodeId> destination_pool(const TemporalGraph& g) {
  std::vector<NodeId> pool;
  pool.reserve(g.events.size());
  for (const auto& e : g.events) pool.push_back(e.dst);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  return pool;
}

std::vector<NodeId> sample_negative(std::span<const EdgeEvent> batch,
                                    std::span<const NodeId> dst_pool, Rng& rng) {
  if (dst_pool.empty()) throw DataError("negative sampling pool is empty");
  std::vector<NodeId> out(batch.size());
  for (auto& n : out) n = dst_pool[rng.uniform_index(dst_pool.size())];
  return out;
}

}  // namespace cnen
