// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/run_config.hpp"

#include <set>

namespace cnen {

void RunConfig::validate() const {
  if (seq_len < 1) throw ConfigError("seq_len must be >= 1");
  if (long_size < 1) throw ConfigError("long_size must be >= 1");
  if (!ablation.no_td && (short_size < 1 || short_size >= long_size))
    throw ConfigError("short_size must satisfy 1 <= short_size < long_size");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must lie in [0, 1)");
  if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (eval_negatives < 1) throw ConfigError("eval_negatives must be >= 1");
  if (mode == EvalMode::kInductive &&
      !(inductive_fraction > 0.0 && inductive_fraction < 1.0))
    throw ConfigError("inductive_fraction must lie in (0, 1)");
  if ((long_q != 0 && long_q % 2 == 0) || (short_q != 0 && short_q % 2 == 0))
    throw ConfigError("hash multipliers must be odd");
  ModelDims{0, 0, time_dim, hidden, out_dim, layers}.validate();
}

ModelDims RunConfig::model_dims(const TemporalGraph& g) const {
  return {g.node_dim(), g.edge_dim(), time_dim, hidden, out_dim, layers};
}

std::pair<std::uint64_t, std::uint64_t> RunConfig::multipliers() const {
  auto [ql, qs] = draw_multipliers(seed);
  if (long_q) ql = long_q;
  if (short_q) qs = short_q;
  if (ql == qs) throw ConfigError("long and short hash multipliers must differ");
  return {ql, qs};
}

const char* to_string(EvalMode m) {
  return m == EvalMode::kTransductive ? "transductive" : "inductive";
}

const char* to_string(MatchMode m) {
  return m == MatchMode::kLiteral ? "literal" : "strict";
}

nlohmann::json to_json(const RunConfig& c) {
  const auto [ql, qs] = c.multipliers();
  return {
      {"seq_len", c.seq_len},
      {"long_size", c.long_size},
      {"short_size", c.short_size},
      {"hidden", c.hidden},
      {"time_dim", c.time_dim},
      {"out_dim", c.out_dim},
      {"layers", c.layers},
      {"lr", c.lr},
      {"batch_size", c.batch_size},
      {"epochs", c.epochs},
      {"dropout", c.dropout},
      {"seed", c.seed},
      {"mode", to_string(c.mode)},
      {"inductive_fraction", c.inductive_fraction},
      {"no_cne", c.ablation.no_cne},
      {"no_td", c.ablation.no_td},
      {"no_nup", c.ablation.no_nup},
      {"no_tup", c.ablation.no_tup},
      {"matching", to_string(c.matching)},
      {"patience", c.patience},
      {"eval_negatives", c.eval_negatives},
      {"train_frac", c.train_frac},
      {"val_frac", c.val_frac},
      {"long_q", ql},
      {"short_q", qs},
  };
}

RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known = {
      "seq_len", "long_size", "short_size", "hidden", "time_dim", "out_dim",
      "layers", "lr", "batch_size", "epochs", "dropout", "seed", "mode",
      "inductive_fraction", "no_cne", "no_td", "no_nup", "no_tup", "matching",
      "patience", "eval_negatives", "train_frac", "val_frac", "long_q", "short_q"};
  for (const auto& [k, _] : j.items())
    if (!known.contains(k)) throw ConfigError("unknown config key '" + k + "'");
  RunConfig c;
  try {
    const auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("seq_len", c.seq_len);
    get("long_size", c.long_size);
    get("short_size", c.short_size);
    get("hidden", c.hidden);
    get("time_dim", c.time_dim);
    get("out_dim", c.out_dim);
    get("layers", c.layers);
    get("lr", c.lr);
    get("batch_size", c.batch_size);
    get("epochs", c.epochs);
    get("dropout", c.dropout);
    get("seed", c.seed);
    get("inductive_fraction", c.inductive_fraction);
    get("no_cne", c.ablation.no_cne);
    get("no_td", c.ablation.no_td);
    get("no_nup", c.ablation.no_nup);
    get("no_tup", c.ablation.no_tup);
    get("patience", c.patience);
    get("eval_negatives", c.eval_negatives);
    get("train_frac", c.train_frac);
    get("val_frac", c.val_frac);
    get("long_q", c.long_q);
    get("short_q", c.short_q);
    if (j.contains("mode")) {
      const auto m = j.at("mode").get<std::string>();
      if (m == "transductive") c.mode = EvalMode::kTransductive;
      else if (m == "inductive") c.mode = EvalMode::kInductive;
      else throw ConfigError("mode must be transductive or inductive");
    }
    if (j.contains("matching")) {
      const auto m = j.at("matching").get<std::string>();
      if (m == "literal") c.matching = MatchMode::kLiteral;
      else if (m == "strict") c.matching = MatchMode::kStrict;
      else throw ConfigError("matching must be literal or strict");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

}  // namespace cnen
