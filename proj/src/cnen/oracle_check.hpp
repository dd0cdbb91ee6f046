// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "cnen/event_log.hpp"

namespace cnen {

struct OracleStream {
  std::size_t num_nodes = 0;
  std::vector<EdgeEvent> events;
};

struct OracleCheckOptions {
  std::size_t streams = 100;
  std::size_t max_nodes = 30;
  std::size_t max_events = 500;
  std::size_t width = 512;
  std::size_t seq_len = 8;
  std::size_t check_every = 25;  // events between full pair sweeps
  bool two_order = true;
  bool neighbor_update = true;
  std::uint64_t seed = 0;
  // 0 draws a multiplier per stream.
  std::uint64_t multiplier = 0;
  // Replaces the random streams when set.
  std::optional<std::vector<OracleStream>> fixed_streams;
};

struct OracleCheckResult {
  std::size_t streams = 0;
  std::size_t events = 0;
  std::size_t pairs_checked = 0;
  std::size_t injective_pairs = 0;
  std::size_t mismatches = 0;      // injective pairs where sketch != exact
  std::size_t collided_pairs = 0;  // pairs where hashing was not injective
  std::size_t degraded_pairs = 0;  // collided pairs whose count differs
  double mean_abs_error_collided = 0.0;
  std::size_t max_abs_error = 0;
  nlohmann::json counterexample;  // first mismatch, null if none
  double seconds = 0.0;

  bool passed() const { return mismatches == 0; }
  nlohmann::json to_json() const;
};

OracleCheckResult run_oracle_check(const OracleCheckOptions& opts);

// Two ids sharing a slot in a width-4 table: node 0 meets 1 then 5, so 5
// evicts 1 and the common neighbor 1 of (0, 2) is lost.
OracleCheckOptions forced_collision_case();

}  // namespace cnen
