// Copyright 2026 The cnen Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cnen/cnen.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string take(char* s) {
  std::string out = s ? s : "";
  cnen_string_free(s);
  return out;
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

fs::path scratch_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("cnen_capi_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CNEN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

// Small triadic stream written as CSV, shared by the CLI tests.
fs::path toy_csv() {
  static const fs::path path = [] {
    const auto d = scratch_dir("data");
    cnen_dataset* ds = nullptr;
    EXPECT_EQ(cnen_dataset_triadic(R"({"num_nodes":60,"num_events":600,"seed":1})", &ds),
              CNEN_OK);
    const auto p = d / "toy.csv";
    EXPECT_EQ(cnen_dataset_save_csv(ds, p.c_str()), CNEN_OK);
    cnen_dataset_free(ds);
    return p;
  }();
  return path;
}

const char* kSmallConfig =
    R"({"seq_len":4,"long_size":16,"short_size":4,"hidden":6,"time_dim":6,)"
    R"("out_dim":6,"batch_size":50,"epochs":2,"lr":0.001,"seed":3})";

TEST(CApi, VersionAndStatusCodes) {
  EXPECT_NE(std::string(cnen_version()), "");
  EXPECT_EQ(CNEN_OK, 0);
  EXPECT_EQ(CNEN_ERR_USAGE, 1);
  EXPECT_EQ(CNEN_ERR_DATA, 2);
  EXPECT_EQ(CNEN_ERR_NUMERICAL, 3);
  EXPECT_EQ(CNEN_ERR_INTERNAL, 4);
}

TEST(CApi, MemoryRoundTrip) {
  cnen_memory* m = nullptr;
  ASSERT_EQ(cnen_memory_create(10, 8, 1, 4, 3, &m), CNEN_OK);
  ASSERT_EQ(cnen_memory_insert(m, 0, 5), CNEN_OK);
  ASSERT_EQ(cnen_memory_insert(m, 1, 5), CNEN_OK);
  std::size_t c = 0;
  ASSERT_EQ(cnen_memory_co_count(m, 0, 0, 1, 1, &c), CNEN_OK);
  EXPECT_EQ(c, 1u);
  ASSERT_EQ(cnen_memory_co_count(m, 0, 0, 1, 0, &c), CNEN_OK);
  EXPECT_EQ(c, 8u);
  ASSERT_EQ(cnen_memory_co_count(m, 1, 0, 1, 1, &c), CNEN_OK);
  EXPECT_EQ(c, 1u);

  std::uint8_t* bytes = nullptr;
  std::size_t len = 0;
  ASSERT_EQ(cnen_memory_snapshot(m, &bytes, &len), CNEN_OK);
  ASSERT_EQ(cnen_memory_reset(m), CNEN_OK);
  ASSERT_EQ(cnen_memory_co_count(m, 0, 0, 1, 1, &c), CNEN_OK);
  EXPECT_EQ(c, 0u);
  ASSERT_EQ(cnen_memory_restore(m, bytes, len), CNEN_OK);
  ASSERT_EQ(cnen_memory_co_count(m, 0, 0, 1, 1, &c), CNEN_OK);
  EXPECT_EQ(c, 1u);
  EXPECT_EQ(cnen_memory_restore(m, bytes, len - 1), CNEN_ERR_DATA);
  cnen_bytes_free(bytes);
  cnen_memory_free(m);
}

TEST(CApi, ErrorsCarryMessages) {
  cnen_memory* m = nullptr;
  EXPECT_EQ(cnen_memory_create(10, 8, 2, 0, 0, &m), CNEN_ERR_USAGE);
  EXPECT_NE(std::string(cnen_last_error()), "");
  EXPECT_EQ(cnen_memory_create(10, 8, 1, 0, 0, nullptr), CNEN_ERR_USAGE);
  ASSERT_EQ(cnen_memory_create(10, 8, 1, 0, 0, &m), CNEN_OK);
  std::size_t c = 0;
  EXPECT_EQ(cnen_memory_co_count(m, 0, 0, 99, 1, &c), CNEN_ERR_DATA);
  EXPECT_EQ(cnen_memory_co_count(m, 1, 0, 1, 1, &c), CNEN_ERR_USAGE);
  cnen_memory_free(m);

  cnen_dataset* ds = nullptr;
  EXPECT_EQ(cnen_dataset_load("/nonexistent.csv", nullptr, &ds), CNEN_ERR_DATA);
  EXPECT_NE(std::string(cnen_last_error()).find("nonexistent"), std::string::npos);
  char* out = nullptr;
  EXPECT_EQ(cnen_config_resolve(R"({"bogus":1})", &out), CNEN_ERR_USAGE);
  EXPECT_EQ(cnen_config_resolve("{not json", &out), CNEN_ERR_USAGE);
}

TEST(CApi, ConfigResolveFillsDefaults) {
  char* out = nullptr;
  ASSERT_EQ(cnen_config_resolve(R"({"seq_len":7})", &out), CNEN_OK);
  const auto j = json::parse(take(out));
  EXPECT_EQ(j.at("seq_len"), 7);
  EXPECT_EQ(j.at("long_size"), 64);
  EXPECT_EQ(j.at("matching"), "literal");
}

TEST(CApi, TrainAndEvaluate) {
  cnen_dataset* ds = nullptr;
  ASSERT_EQ(cnen_dataset_load(toy_csv().c_str(), nullptr, &ds), CNEN_OK);
  std::size_t n = 0, e = 0, dn = 0, de = 0;
  ASSERT_EQ(cnen_dataset_info(ds, &n, &e, &dn, &de), CNEN_OK);
  EXPECT_EQ(e, 600u);

  const auto ckpt = scratch_dir("train") / "model.ckpt";
  int epochs_seen = 0;
  char* out = nullptr;
  ASSERT_EQ(cnen_train(ds, kSmallConfig, "toy", ckpt.c_str(),
                       [](const char*, void* user) { ++*static_cast<int*>(user); },
                       &epochs_seen, &out),
            CNEN_OK)
      << cnen_last_error();
  const auto m = json::parse(take(out));
  EXPECT_EQ(epochs_seen, 2);
  EXPECT_EQ(m.at("epoch").size(), 2u);
  EXPECT_EQ(m.at("causality_violations"), 0);
  EXPECT_TRUE(fs::exists(ckpt));

  ASSERT_EQ(cnen_evaluate(ds, kSmallConfig, "toy", ckpt.c_str(), &out), CNEN_OK)
      << cnen_last_error();
  const auto ev = json::parse(take(out));
  EXPECT_DOUBLE_EQ(ev.at("test_ap").get<double>(), m.at("test_ap").get<double>());

  EXPECT_EQ(cnen_evaluate(ds, R"({"hidden":7})", "toy", ckpt.c_str(), &out),
            CNEN_ERR_DATA);
  cnen_dataset_free(ds);
}

TEST(Cli, OracleCheckPasses) {
  const auto d = scratch_dir("oracle");
  EXPECT_EQ(run_cli("oracle-check --streams 10 --out " + d.string()), 0);
  const auto j = read_json(d / "oracle_check.json");
  EXPECT_EQ(j.at("mismatches"), 0);
  EXPECT_EQ(run_cli("oracle-check --forced-collision --out " + d.string()), 0);
  EXPECT_GT(read_json(d / "oracle_check.json").at("degraded_pairs").get<int>(), 0);
}

TEST(Cli, UsageAndDataErrors) {
  EXPECT_EQ(run_cli("train --bogus-flag"), 1);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_NE(run_cli("train --data /nonexistent.csv --out /tmp"), 0);
  const auto d = scratch_dir("bad");
  std::ofstream(d / "bad.csv") << "u,i,ts\n0,1,1\n0,x,2\n";
  EXPECT_EQ(run_cli("train --data " + (d / "bad.csv").string() + " --out " + d.string()), 2);
  EXPECT_EQ(run_cli("train --data " + toy_csv().string() + " --short-size 99 --out " +
                    d.string()),
            1);
}

TEST(Cli, TrainWritesConfigAndIsDeterministic) {
  const auto a = scratch_dir("run_a");
  const auto b = scratch_dir("run_b");
  std::ofstream(a / "cfg.json") << kSmallConfig;
  const std::string common =
      "train --data " + toy_csv().string() + " --config " + (a / "cfg.json").string() +
      " --no-cne --out ";
  ASSERT_EQ(run_cli(common + a.string()), 0);
  ASSERT_EQ(run_cli(common + b.string()), 0);
  const auto cfg = read_json(a / "config.json");
  EXPECT_EQ(cfg.at("no_cne"), true);
  EXPECT_EQ(cfg.at("seq_len"), 4);
  auto ma = read_json(a / "metrics.json");
  auto mb = read_json(b / "metrics.json");
  ma.erase("wall_time");
  mb.erase("wall_time");
  EXPECT_EQ(ma.dump(), mb.dump());
  EXPECT_TRUE(fs::exists(a / "model.ckpt"));

  EXPECT_EQ(run_cli("eval --data " + toy_csv().string() + " --config " +
                    (a / "cfg.json").string() + " --no-cne --checkpoint " +
                    (a / "model.ckpt").string() + " --out " + a.string()),
            0);
  EXPECT_TRUE(fs::exists(a / "eval_metrics.json"));
}

TEST(Cli, SweepWritesTable) {
  const auto d = scratch_dir("sweep");
  std::ofstream(d / "cfg.json") << kSmallConfig;
  ASSERT_EQ(run_cli("sweep --data " + toy_csv().string() + " --config " +
                    (d / "cfg.json").string() +
                    " --epochs 1 --axis sequence_length --values 2,4 --out " + d.string()),
            0);
  const auto j = read_json(d / "sweep.json");
  EXPECT_EQ(j.at("rows").size(), 2u);
}

}  // namespace
