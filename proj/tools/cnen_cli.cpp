// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0
//
// cnen train|eval|sweep|bench|oracle-check

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cnen/cnen.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Owned {
  char* s = nullptr;
  ~Owned() { cnen_string_free(s); }
};

struct DatasetHandle {
  cnen_dataset* ds = nullptr;
  ~DatasetHandle() { cnen_dataset_free(ds); }
};

int report(cnen_status st) {
  if (st != CNEN_OK) std::cerr << "error: " << cnen_last_error() << "\n";
  return static_cast<int>(st);
}

// Config overrides; only flags that were given end up in the JSON.
struct Overrides {
  std::string config_file;
  std::optional<std::size_t> seq_len, long_size, short_size, hidden, time_dim, out_dim,
      layers, batch_size, epochs, patience, eval_negatives;
  std::optional<double> lr, dropout, inductive_fraction;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode, matching;
  bool no_cne = false, no_td = false, no_nup = false, no_tup = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config_file, "Resolved config JSON to start from")
        ->check(CLI::ExistingFile);
    app->add_option("--seq-len", seq_len, "Sequence length l_s");
    app->add_option("--long-size", long_size, "Long hashtable width M_l");
    app->add_option("--short-size", short_size, "Short hashtable width M_s");
    app->add_option("--hidden", hidden, "Hidden size d");
    app->add_option("--time-dim", time_dim, "Time encoding size d_T");
    app->add_option("--out-dim", out_dim, "Node representation size d_o");
    app->add_option("--layers", layers, "Fusion layers L");
    app->add_option("--lr", lr, "Adam learning rate");
    app->add_option("--batch-size", batch_size, "Events per batch");
    app->add_option("--epochs", epochs, "Maximum training epochs");
    app->add_option("--dropout", dropout, "Dropout rate after each fusion layer");
    app->add_option("--seed", seed, "Seed for init, sampling and hashing");
    app->add_option("--mode", mode, "Evaluation protocol")->check(CLI::IsMember({"transductive", "inductive"}));
    app->add_option("--inductive-fraction", inductive_fraction, "Share of val/test nodes masked");
    app->add_option("--matching", matching, "Slot matching: literal counts empty slots")->check(CLI::IsMember({"literal", "strict"}));
    app->add_option("--patience", patience, "Early-stopping patience in epochs");
    app->add_option("--eval-negatives", eval_negatives, "Negatives per positive at evaluation");
    app->add_flag("--no-cne", no_cne, "Zero the co-neighbor encoding");
    app->add_flag("--no-td", no_td, "Long hashtable only");
    app->add_flag("--no-nup", no_nup, "Skip neighbor-memory updates");
    app->add_flag("--no-tup", no_tup, "Skip 2-order updates");
  }

  json resolve_input() const {
    json j = json::object();
    if (!config_file.empty()) {
      std::ifstream in(config_file);
      j = json::parse(in);
    }
    const auto set = [&](const char* key, const auto& opt) {
      if (opt) j[key] = *opt;
    };
    set("seq_len", seq_len);
    set("long_size", long_size);
    set("short_size", short_size);
    set("hidden", hidden);
    set("time_dim", time_dim);
    set("out_dim", out_dim);
    set("layers", layers);
    set("lr", lr);
    set("batch_size", batch_size);
    set("epochs", epochs);
    set("dropout", dropout);
    set("seed", seed);
    set("mode", mode);
    set("inductive_fraction", inductive_fraction);
    set("matching", matching);
    set("patience", patience);
    set("eval_negatives", eval_negatives);
    if (no_cne) j["no_cne"] = true;
    if (no_td) j["no_td"] = true;
    if (no_nup) j["no_nup"] = true;
    if (no_tup) j["no_tup"] = true;
    return j;
  }
};

struct DataArgs {
  std::string path;
  std::string node_features;
  std::string header = "auto";
  bool has_label = false;

  void attach(CLI::App* app) {
    app->add_option("--data", path, "Event CSV: src,dst,t[,label],features...")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option("--node-features", node_features, "Node feature CSV: id,features...")
        ->check(CLI::ExistingFile);
    app->add_option("--header", header, "Header row detection")->check(CLI::IsMember({"auto", "present", "absent"}));
    app->add_flag("--has-label", has_label, "Fourth column is a label to skip");
  }

  cnen_status load(DatasetHandle& h) const {
    json layout = {{"header", header}};
    if (has_label) layout["has_label"] = true;
    auto st = cnen_dataset_load(path.c_str(), layout.dump().c_str(), &h.ds);
    if (st == CNEN_OK && !node_features.empty())
      st = cnen_dataset_load_node_features(h.ds, node_features.c_str());
    return st;
  }

  std::string name() const { return fs::path(path).stem().string(); }
};

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text << "\n";
}

// Validates the overrides and writes the resolved config next to results.
cnen_status resolve_config(const Overrides& ov, const fs::path& out_dir, std::string& resolved) {
  json input;
  try {
    input = ov.resolve_input();
  } catch (const json::exception& e) {
    std::cerr << "error: cannot read config: " << e.what() << "\n";
    return CNEN_ERR_USAGE;
  }
  Owned r;
  const auto st = cnen_config_resolve(input.dump().c_str(), &r.s);
  if (st != CNEN_OK) return st;
  resolved = r.s;
  write_file(out_dir / "config.json", resolved);
  return CNEN_OK;
}

void print_epoch(const char* epoch_json, void*) {
  const auto j = json::parse(epoch_json);
  std::fprintf(stderr, "epoch %zu  loss %.5f  val_ap %.4f  val_auc %.4f\n",
               j["epoch"].get<std::size_t>(), j["train_loss"].get<double>(),
               j["val_ap"].get<double>(), j["val_auc"].get<double>());
}

int cmd_train(const DataArgs& data, const Overrides& ov, const fs::path& out) {
  std::string cfg;
  if (auto st = resolve_config(ov, out, cfg)) return report(st);
  DatasetHandle ds;
  if (auto st = data.load(ds)) return report(st);
  Owned metrics;
  const auto ckpt = (out / "model.ckpt").string();
  if (auto st = cnen_train(ds.ds, cfg.c_str(), data.name().c_str(), ckpt.c_str(),
                           print_epoch, nullptr, &metrics.s))
    return report(st);
  write_file(out / "metrics.json", metrics.s);
  const auto j = json::parse(metrics.s);
  std::printf("test_ap %.4f  test_auc %.4f  best_epoch %zu  wall_time %.1fs\n",
              j["test_ap"].get<double>(), j["test_auc"].get<double>(),
              j["best_epoch"].get<std::size_t>(), j["wall_time"].get<double>());
  return 0;
}

int cmd_eval(const DataArgs& data, const Overrides& ov, const std::string& checkpoint,
             const fs::path& out) {
  std::string cfg;
  if (auto st = resolve_config(ov, out, cfg)) return report(st);
  DatasetHandle ds;
  if (auto st = data.load(ds)) return report(st);
  Owned metrics;
  if (auto st = cnen_evaluate(ds.ds, cfg.c_str(), data.name().c_str(), checkpoint.c_str(),
                              &metrics.s))
    return report(st);
  write_file(out / "eval_metrics.json", metrics.s);
  const auto j = json::parse(metrics.s);
  std::printf("val_ap %.4f  test_ap %.4f  test_auc %.4f\n", j["val_ap"].get<double>(),
              j["test_ap"].get<double>(), j["test_auc"].get<double>());
  return 0;
}

int cmd_sweep(const DataArgs& data, const Overrides& ov, const std::string& axis,
              const std::vector<std::size_t>& values, const fs::path& out) {
  std::string cfg;
  if (auto st = resolve_config(ov, out, cfg)) return report(st);
  DatasetHandle ds;
  if (auto st = data.load(ds)) return report(st);
  Owned table;
  if (auto st = cnen_sweep(ds.ds, cfg.c_str(), axis.c_str(), values.data(), values.size(),
                           data.name().c_str(), &table.s))
    return report(st);
  write_file(out / "sweep.json", table.s);
  for (const auto& row : json::parse(table.s)["rows"])
    std::printf("%s=%g  val_ap %.4f  test_ap %.4f  test_auc %.4f\n", axis.c_str(),
                row["value"].get<double>(), row["best_val_ap"].get<double>(),
                row["test_ap"].get<double>(), row["test_auc"].get<double>());
  return 0;
}

int cmd_bench(const json& opts, const fs::path& out) {
  Owned rep;
  if (auto st = cnen_bench(opts.dump().c_str(), &rep.s)) return report(st);
  write_file(out / "bench.json", rep.s);
  const auto j = json::parse(rep.s);
  const auto line = [&](const char* key, const char* label) {
    std::printf("%-28s slope %.3f  doubling ratio %.3f\n", label, j[key]["slope"].get<double>(),
                j[key]["doubling_ratio"].get<double>());
  };
  line("structure_vs_width", "structure encoding vs M");
  line("structure_vs_seq_len", "structure encoding vs l_s");
  line("forward_vs_seq_len", "features+forward vs l_s");
  std::printf("trivial run (l_s=1, M=1): %.3fs\n", j["trivial_run_seconds"].get<double>());
  return 0;
}

int cmd_oracle(const json& opts, const fs::path& out) {
  Owned res;
  int passed = 0;
  if (auto st = cnen_oracle_check(opts.dump().c_str(), &res.s, &passed)) return report(st);
  write_file(out / "oracle_check.json", res.s);
  const auto j = json::parse(res.s);
  std::printf("streams %zu  events %zu  pairs %zu  injective %zu  mismatches %zu\n",
              j["streams"].get<std::size_t>(), j["events"].get<std::size_t>(),
              j["pairs_checked"].get<std::size_t>(), j["injective_pairs"].get<std::size_t>(),
              j["mismatches"].get<std::size_t>());
  std::printf("collided pairs %zu  degraded %zu  mean abs error %.4f  max abs error %zu\n",
              j["collided_pairs"].get<std::size_t>(), j["degraded_pairs"].get<std::size_t>(),
              j["mean_abs_error_collided"].get<double>(),
              j["max_abs_error"].get<std::size_t>());
  if (!passed) {
    std::cerr << "mismatch under injective hashing; counterexample:\n"
              << j["counterexample"].dump(2) << "\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cnen: temporal link prediction with co-neighbor encoding"};
  app.require_subcommand(1);
  std::string out_dir = ".";

  auto* train = app.add_subcommand("train", "Train, early-stop on validation AP, test");
  DataArgs train_data;
  Overrides train_ov;
  train_data.attach(train);
  train_ov.attach(train);
  train->add_option("--out", out_dir, "Output directory");

  auto* eval = app.add_subcommand("eval", "Score validation and test with a checkpoint");
  DataArgs eval_data;
  Overrides eval_ov;
  std::string checkpoint;
  eval_data.attach(eval);
  eval_ov.attach(eval);
  eval->add_option("--checkpoint", checkpoint)->required()->check(CLI::ExistingFile);
  eval->add_option("--out", out_dir, "Output directory");

  auto* sweep = app.add_subcommand("sweep", "One full run per value");
  DataArgs sweep_data;
  Overrides sweep_ov;
  std::string axis;
  std::vector<std::size_t> values;
  sweep_data.attach(sweep);
  sweep_ov.attach(sweep);
  sweep->add_option("--axis", axis)
      ->required()
      ->check(CLI::IsMember({"hashtable_size", "sequence_length"}));
  sweep->add_option("--values", values)->required()->delimiter(',');
  sweep->add_option("--out", out_dir, "Output directory");

  auto* bench = app.add_subcommand("bench", "Time encoding against l_s and M");
  std::vector<std::size_t> seq_lens, widths;
  std::optional<std::size_t> repeats, hidden, bench_nodes, bench_events;
  std::optional<std::uint64_t> bench_seed;
  bench->add_option("--seq-lens", seq_lens)->delimiter(',');
  bench->add_option("--widths", widths)->delimiter(',');
  bench->add_option("--repeats", repeats);
  bench->add_option("--hidden", hidden);
  bench->add_option("--nodes", bench_nodes);
  bench->add_option("--events", bench_events);
  bench->add_option("--seed", bench_seed);
  bench->add_option("--out", out_dir, "Output directory");

  auto* oracle = app.add_subcommand("oracle-check", "Sketch vs exact common neighbors");
  std::optional<std::size_t> streams, max_nodes, max_events, width, o_seq_len;
  std::optional<std::uint64_t> o_seed, multiplier;
  bool forced = false, no_tup = false, no_nup = false;
  oracle->add_option("--streams", streams);
  oracle->add_option("--max-nodes", max_nodes);
  oracle->add_option("--max-events", max_events);
  oracle->add_option("--width", width);
  oracle->add_option("--seq-len", o_seq_len);
  oracle->add_option("--seed", o_seed);
  oracle->add_option("--multiplier", multiplier);
  oracle->add_flag("--forced-collision", forced, "Run the constructed collision case");
  oracle->add_flag("--no-tup", no_tup);
  oracle->add_flag("--no-nup", no_nup);
  oracle->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train) return cmd_train(train_data, train_ov, out_dir);
    if (*eval) return cmd_eval(eval_data, eval_ov, checkpoint, out_dir);
    if (*sweep) return cmd_sweep(sweep_data, sweep_ov, axis, values, out_dir);
    if (*bench) {
      json o = json::object();
      if (!seq_lens.empty()) o["seq_lens"] = seq_lens;
      if (!widths.empty()) o["widths"] = widths;
      if (repeats) o["repeats"] = *repeats;
      if (hidden) o["hidden"] = *hidden;
      if (bench_nodes) o["num_nodes"] = *bench_nodes;
      if (bench_events) o["num_events"] = *bench_events;
      if (bench_seed) o["seed"] = *bench_seed;
      return cmd_bench(o, out_dir);
    }
    json o = json::object();
    if (forced) o["forced_collision"] = true;
    if (streams) o["streams"] = *streams;
    if (max_nodes) o["max_nodes"] = *max_nodes;
    if (max_events) o["max_events"] = *max_events;
    if (width) o["width"] = *width;
    if (o_seq_len) o["seq_len"] = *o_seq_len;
    if (o_seed) o["seed"] = *o_seed;
    if (multiplier) o["multiplier"] = *multiplier;
    if (no_tup) o["two_order"] = false;
    if (no_nup) o["neighbor_update"] = false;
    return cmd_oracle(o, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
