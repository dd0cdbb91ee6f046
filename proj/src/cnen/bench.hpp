// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

namespace cnen {

struct BenchOptions {
  std::vector<std::size_t> seq_lens{4, 8, 16, 32, 64, 100};
  std::vector<std::size_t> widths{32, 64, 128, 256, 512};
  std::size_t fixed_seq_len = 32;
  std::size_t fixed_width = 64;
  std::size_t num_nodes = 2000;
  std::size_t num_events = 20000;
  std::size_t batch_size = 200;
  std::size_t hidden = 50;
  std::size_t repeats = 5;
  std::uint64_t seed = 0;
};

struct ScalingSeries {
  std::vector<double> x;
  std::vector<double> seconds;  // best of repeats, per batch
  double slope = 0.0;           // d log(seconds) / d log(x)
  double doubling_ratio() const;
};

struct BenchReport {
  // Co-neighbor structure encoding per batch against table width M.
  ScalingSeries structure_vs_width;
  // Structure encoding per batch against l_s, M fixed.
  ScalingSeries structure_vs_seq_len;
  // Feature assembly plus the full forward pass per batch against l_s.
  ScalingSeries forward_vs_seq_len;
  double trivial_run_seconds = 0.0;  // l_s = 1, M = 1, one epoch on toy data

  nlohmann::json to_json() const;
};

// Least-squares slope of log(y) on log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

BenchReport run_bench(const BenchOptions& opts);

}  // namespace cnen
