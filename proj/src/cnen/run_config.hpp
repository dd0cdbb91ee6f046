// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "cnen/encoder.hpp"
#include "cnen/event_log.hpp"
#include "cnen/neighbor_memory.hpp"

namespace cnen {

struct AblationFlags {
  bool no_cne = false;  // zero the co-neighbor inputs
  bool no_td = false;   // long table only
  bool no_nup = false;  // skip neighbor-memory updates
  bool no_tup = false;  // skip 2-order updates
  friend bool operator==(const AblationFlags&, const AblationFlags&) = default;
};

struct RunConfig {
  std::size_t seq_len = 32;
  std::size_t long_size = 64;
  std::size_t short_size = 16;
  std::size_t hidden = 50;
  std::size_t time_dim = 50;
  std::size_t out_dim = 50;
  std::size_t layers = 2;
  double lr = 1e-4;
  std::size_t batch_size = 200;
  std::size_t epochs = 10;
  double dropout = 0.1;
  std::uint64_t seed = 0;
  EvalMode mode = EvalMode::kTransductive;
  double inductive_fraction = 0.10;
  AblationFlags ablation;
  MatchMode matching = MatchMode::kLiteral;
  std::size_t patience = 5;
  std::size_t eval_negatives = 1;
  double train_frac = 0.70;
  double val_frac = 0.15;
  // 0 derives both multipliers from the seed.
  std::uint64_t long_q = 0;
  std::uint64_t short_q = 0;

  void validate() const;
  ModelDims model_dims(const TemporalGraph& g) const;
  std::pair<std::uint64_t, std::uint64_t> multipliers() const;
  UpdateFlags update_flags() const { return {!ablation.no_tup, !ablation.no_nup}; }
  bool operator==(const RunConfig&) const = default;
};

nlohmann::json to_json(const RunConfig& c);
// Unknown keys are rejected; missing keys keep their defaults.
RunConfig config_from_json(const nlohmann::json& j);

const char* to_string(EvalMode m);
const char* to_string(MatchMode m);

}  // namespace cnen
