// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/cnen.h"

#include <chrono>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include <json.hpp>

#include "cnen/bench.hpp"
#include "cnen/checkpoint.hpp"
#include "cnen/harness.hpp"
#include "cnen/neighbor_memory.hpp"
#include "cnen/oracle_check.hpp"
#include "cnen/run_config.hpp"
#include "cnen/synthetic.hpp"

struct cnen_dataset {
  cnen::TemporalGraph graph;
};

struct cnen_memory {
  cnen::TemporalDiverseMemory memory;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

cnen_status fail(cnen_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <typename Fn>
cnen_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return CNEN_OK;
  } catch (const cnen::Error& e) {
    return fail(static_cast<cnen_status>(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(CNEN_ERR_USAGE, std::string("invalid JSON: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(CNEN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(CNEN_ERR_INTERNAL, e.what());
  }
}

void require(const void* p, const char* what) {
  if (!p) throw cnen::ConfigError(std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json parse_or_empty(const char* text) {
  if (!text || !*text) return json::object();
  auto j = json::parse(text);
  if (!j.is_object()) throw cnen::ConfigError("expected a JSON object");
  return j;
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : j.items()) {
    bool ok = false;
    for (const char* key : keys) ok = ok || k == key;
    if (!ok) throw cnen::ConfigError("unknown option '" + k + "'");
  }
}

template <typename T>
void get_opt(const json& j, const char* key, T& field) {
  if (j.contains(key)) j.at(key).get_to(field);
}

cnen::CsvLayout parse_layout(const char* layout_json) {
  const json j = parse_or_empty(layout_json);
  reject_unknown(j, {"header", "delimiter", "has_label", "has_index_column"});
  cnen::CsvLayout l;
  if (j.contains("header")) {
    const auto h = j.at("header").get<std::string>();
    if (h == "auto") l.header = cnen::HeaderMode::kAuto;
    else if (h == "present") l.header = cnen::HeaderMode::kPresent;
    else if (h == "absent") l.header = cnen::HeaderMode::kAbsent;
    else throw cnen::ConfigError("header must be auto, present or absent");
  }
  if (j.contains("delimiter")) {
    const auto d = j.at("delimiter").get<std::string>();
    if (d.size() != 1) throw cnen::ConfigError("delimiter must be one character");
    l.delimiter = d[0];
  }
  get_opt(j, "has_label", l.has_label);
  get_opt(j, "has_index_column", l.has_index_column);
  return l;
}

}  // namespace

extern "C" {

const char* cnen_version(void) { return "0.1.0"; }

const char* cnen_last_error(void) { return g_last_error.c_str(); }

void cnen_string_free(char* s) { std::free(s); }

void cnen_bytes_free(uint8_t* bytes) { std::free(bytes); }

cnen_status cnen_dataset_load(const char* path, const char* layout_json,
                              cnen_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto ds = std::make_unique<cnen_dataset>();
    ds->graph = cnen::load_events(path, parse_layout(layout_json));
    *out = ds.release();
  });
}

cnen_status cnen_dataset_triadic(const char* options_json, cnen_dataset** out) {
  return guarded([&] {
    require(out, "out");
    const json j = parse_or_empty(options_json);
    reject_unknown(j, {"num_nodes", "num_events", "closure_prob", "window", "seed"});
    cnen::TriadicOptions o;
    get_opt(j, "num_nodes", o.num_nodes);
    get_opt(j, "num_events", o.num_events);
    get_opt(j, "closure_prob", o.closure_prob);
    get_opt(j, "window", o.window);
    get_opt(j, "seed", o.seed);
    auto ds = std::make_unique<cnen_dataset>();
    ds->graph = cnen::triadic_closure_stream(o);
    *out = ds.release();
  });
}

cnen_status cnen_dataset_load_node_features(cnen_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    cnen::load_node_features(ds->graph, path);
  });
}

cnen_status cnen_dataset_info(const cnen_dataset* ds, size_t* num_nodes,
                              size_t* num_events, size_t* node_dim, size_t* edge_dim) {
  return guarded([&] {
    require(ds, "dataset");
    if (num_nodes) *num_nodes = ds->graph.num_nodes;
    if (num_events) *num_events = ds->graph.events.size();
    if (node_dim) *node_dim = ds->graph.node_dim();
    if (edge_dim) *edge_dim = ds->graph.edge_dim();
  });
}

cnen_status cnen_dataset_save_csv(const cnen_dataset* ds, const char* path) {
  return guarded([&] {
    require(ds, "dataset");
    require(path, "path");
    cnen::save_events_csv(ds->graph, path);
  });
}

void cnen_dataset_free(cnen_dataset* ds) { delete ds; }

cnen_status cnen_config_resolve(const char* config_json, char** resolved_json) {
  return guarded([&] {
    require(resolved_json, "resolved_json");
    const auto cfg = cnen::config_from_json(parse_or_empty(config_json));
    *resolved_json = dup_string(cnen::to_json(cfg).dump(2));
  });
}

cnen_status cnen_train(const cnen_dataset* ds, const char* config_json,
                       const char* dataset_name, const char* checkpoint_path,
                       cnen_epoch_callback callback, void* user, char** metrics_json) {
  return guarded([&] {
    require(ds, "dataset");
    require(metrics_json, "metrics_json");
    const auto cfg = cnen::config_from_json(parse_or_empty(config_json));
    cnen::Harness h(ds->graph, cfg);
    cnen::Harness::EpochCallback cb;
    if (callback)
      cb = [&](const cnen::EpochRecord& r) {
        const json j = {{"epoch", r.epoch},
                        {"train_loss", r.train_loss},
                        {"val_ap", r.val.ap},
                        {"val_auc", r.val.auc}};
        callback(j.dump().c_str(), user);
      };
    const auto result = h.run(dataset_name ? dataset_name : "", cb);
    if (checkpoint_path) cnen::save_checkpoint(h.params(), checkpoint_path);
    *metrics_json = dup_string(result.to_json().dump(2));
  });
}

cnen_status cnen_evaluate(const cnen_dataset* ds, const char* config_json,
                          const char* dataset_name, const char* checkpoint_path,
                          char** metrics_json) {
  return guarded([&] {
    require(ds, "dataset");
    require(checkpoint_path, "checkpoint_path");
    require(metrics_json, "metrics_json");
    const auto start = std::chrono::steady_clock::now();
    const auto cfg = cnen::config_from_json(parse_or_empty(config_json));
    cnen::Harness h(ds->graph, cfg);
    h.params() = cnen::load_checkpoint(checkpoint_path, cfg.model_dims(ds->graph));
    h.position_at(cnen::Phase::kValidation);
    const auto val = h.evaluate(cnen::Phase::kValidation);
    h.position_at(cnen::Phase::kTest);
    const auto test = h.evaluate(cnen::Phase::kTest);
    const json j = {
        {"dataset", dataset_name ? dataset_name : ""},
        {"mode", cnen::to_string(cfg.mode)},
        {"seed", cfg.seed},
        {"config", cnen::to_json(cfg)},
        {"val_ap", val.ap},
        {"val_auc", val.auc},
        {"test_ap", test.ap},
        {"test_auc", test.auc},
        {"test_loss", test.loss},
        {"test_scored", test.scored},
        {"causality_violations", h.causality_violations()},
        {"wall_time",
         std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
    *metrics_json = dup_string(j.dump(2));
  });
}

cnen_status cnen_sweep(const cnen_dataset* ds, const char* config_json,
                       const char* axis, const size_t* values, size_t count,
                       const char* dataset_name, char** table_json) {
  return guarded([&] {
    require(ds, "dataset");
    require(axis, "axis");
    require(table_json, "table_json");
    if (count > 0) require(values, "values");
    cnen::SweepAxis ax;
    if (std::strcmp(axis, "hashtable_size") == 0) ax = cnen::SweepAxis::kHashtableSize;
    else if (std::strcmp(axis, "sequence_length") == 0) ax = cnen::SweepAxis::kSequenceLength;
    else throw cnen::ConfigError("axis must be hashtable_size or sequence_length");
    const auto cfg = cnen::config_from_json(parse_or_empty(config_json));
    const std::vector<std::size_t> vals(values, values + count);
    const auto rows = cnen::run_sweep(ds->graph, cfg, ax, vals, dataset_name ? dataset_name : "");
    *table_json = dup_string(cnen::sweep_to_json(ax, rows).dump(2));
  });
}

cnen_status cnen_bench(const char* options_json, char** report_json) {
  return guarded([&] {
    require(report_json, "report_json");
    const json j = parse_or_empty(options_json);
    reject_unknown(j, {"seq_lens", "widths", "fixed_seq_len", "fixed_width", "num_nodes",
                       "num_events", "batch_size", "hidden", "repeats", "seed"});
    cnen::BenchOptions o;
    get_opt(j, "seq_lens", o.seq_lens);
    get_opt(j, "widths", o.widths);
    get_opt(j, "fixed_seq_len", o.fixed_seq_len);
    get_opt(j, "fixed_width", o.fixed_width);
    get_opt(j, "num_nodes", o.num_nodes);
    get_opt(j, "num_events", o.num_events);
    get_opt(j, "batch_size", o.batch_size);
    get_opt(j, "hidden", o.hidden);
    get_opt(j, "repeats", o.repeats);
    get_opt(j, "seed", o.seed);
    *report_json = dup_string(cnen::run_bench(o).to_json().dump(2));
  });
}

cnen_status cnen_oracle_check(const char* options_json, char** result_json, int* passed) {
  return guarded([&] {
    require(result_json, "result_json");
    const json j = parse_or_empty(options_json);
    reject_unknown(j, {"streams", "max_nodes", "max_events", "width", "seq_len",
                       "check_every", "two_order", "neighbor_update", "seed",
                       "multiplier", "forced_collision"});
    bool forced = false;
    get_opt(j, "forced_collision", forced);
    cnen::OracleCheckOptions o = forced ? cnen::forced_collision_case() : cnen::OracleCheckOptions{};
    get_opt(j, "streams", o.streams);
    get_opt(j, "max_nodes", o.max_nodes);
    get_opt(j, "max_events", o.max_events);
    get_opt(j, "width", o.width);
    get_opt(j, "seq_len", o.seq_len);
    get_opt(j, "check_every", o.check_every);
    get_opt(j, "two_order", o.two_order);
    get_opt(j, "neighbor_update", o.neighbor_update);
    get_opt(j, "seed", o.seed);
    get_opt(j, "multiplier", o.multiplier);
    const auto res = cnen::run_oracle_check(o);
    if (passed) *passed = res.passed() ? 1 : 0;
    *result_json = dup_string(res.to_json().dump(2));
  });
}

cnen_status cnen_memory_create(size_t num_nodes, size_t long_width, uint64_t long_q,
                               size_t short_width, uint64_t short_q, cnen_memory** out) {
  return guarded([&] {
    require(out, "out");
    *out = short_width == 0
               ? new cnen_memory{cnen::TemporalDiverseMemory(num_nodes, long_width, long_q)}
               : new cnen_memory{cnen::TemporalDiverseMemory(num_nodes, long_width, long_q,
                                                             short_width, short_q)};
  });
}

void cnen_memory_free(cnen_memory* mem) { delete mem; }

cnen_status cnen_memory_insert(cnen_memory* mem, uint32_t owner, uint32_t neighbor) {
  return guarded([&] {
    require(mem, "memory");
    const auto n = mem->memory.num_nodes();
    if (owner >= n || neighbor >= n) throw cnen::DataError("node id out of range");
    mem->memory.long_table().insert(owner, neighbor);
    if (mem->memory.has_short()) mem->memory.short_table().insert(owner, neighbor);
  });
}

cnen_status cnen_memory_co_count(const cnen_memory* mem, int table, uint32_t a,
                                 uint32_t b, int strict, size_t* out) {
  return guarded([&] {
    require(mem, "memory");
    require(out, "out");
    if (table != 0 && table != 1) throw cnen::ConfigError("table must be 0 or 1");
    if (table == 1 && !mem->memory.has_short())
      throw cnen::ConfigError("memory has no short table");
    const auto& t = table == 0 ? mem->memory.long_table() : mem->memory.short_table();
    if (a >= t.num_nodes() || b >= t.num_nodes())
      throw cnen::DataError("node id out of range");
    *out = t.co_count(a, b, strict ? cnen::MatchMode::kStrict : cnen::MatchMode::kLiteral);
  });
}

cnen_status cnen_memory_reset(cnen_memory* mem) {
  return guarded([&] {
    require(mem, "memory");
    mem->memory.reset();
  });
}

cnen_status cnen_memory_snapshot(const cnen_memory* mem, uint8_t** bytes, size_t* len) {
  return guarded([&] {
    require(mem, "memory");
    require(bytes, "bytes");
    require(len, "len");
    const auto img = cnen::snapshot(mem->memory);
    auto* buf = static_cast<uint8_t*>(std::malloc(img.bytes.size()));
    if (!buf) throw std::bad_alloc();
    std::memcpy(buf, img.bytes.data(), img.bytes.size());
    *bytes = buf;
    *len = img.bytes.size();
  });
}

cnen_status cnen_memory_restore(cnen_memory* mem, const uint8_t* bytes, size_t len) {
  return guarded([&] {
    require(mem, "memory");
    require(bytes, "bytes");
    cnen::MemoryImage img;
    img.bytes.assign(bytes, bytes + len);
    cnen::restore(mem->memory, img);
  });
}

}  // extern "C"
