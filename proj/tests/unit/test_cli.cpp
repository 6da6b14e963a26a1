// Copyright 2026 The dimcsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "commands.hpp"

using namespace dimcsim::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("dimcsim_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

constexpr const char* kSmall = R"({
  "network": "small",
  "precision": {"bits": 4, "input_signed": false, "weight_signed": true},
  "quant": {"right_shift": 3},
  "layers": [
    {"name": "a", "ich": 3, "och": 5, "h": 6, "w": 6, "kh": 3, "kw": 3, "padding": 1},
    {"name": "wide", "ich": 4, "och": 4, "h": 4, "w": 4, "kh": 1, "kw": 1, "bits": 8},
    {"name": "b", "ich": 70, "och": 9, "h": 4, "w": 4, "kh": 2, "kw": 2, "stride": 2},
    {"name": "fc", "kind": "fc", "ich": 300, "och": 17}
  ]})";

}  // namespace

TEST_F(CliTest, SingleUnitLayer) {
  SimulateOptions o;
  o.workload = write("one.json", R"({"layers": [{"name": "u", "ich": 1, "och": 1, "h": 1, "w": 1, "kh": 1, "kw": 1}]})");
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(o, out, err), kExitOk) << err.str();
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].rfind("u,2,", 0), 0u) << rows[1];
}

TEST_F(CliTest, WideLayersAreListedAsIneligible) {
  SimulateOptions o;
  o.workload = write("w.json", kSmall);
  std::ostringstream out, err;
  EXPECT_EQ(cmd_simulate(o, out, err), kExitOk);
  EXPECT_EQ(lines(out.str()).size(), 4u);
  EXPECT_NE(err.str().find("'wide'"), std::string::npos);
  EXPECT_NE(err.str().find("4-bit"), std::string::npos);

  o.format = ReportFormat::Json;
  std::ostringstream js;
  EXPECT_EQ(cmd_simulate(o, js, err), kExitOk);
  const auto j = nlohmann::json::parse(js.str());
  EXPECT_EQ(j["layers"].size(), 3u);
  EXPECT_EQ(j["ineligible"][0]["layer"], "wide");
  EXPECT_EQ(j["ineligible"][0]["index"], 1);
}

TEST_F(CliTest, DeterministicAcrossRunsAndJobCounts) {
  SimulateOptions o;
  o.workload = write("w.json", kSmall);
  o.output = dir_ / "a.csv";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(o, out, err), kExitOk);
  o.output = dir_ / "b.csv";
  o.jobs = 3;
  ASSERT_EQ(cmd_simulate(o, out, err), kExitOk);
  o.output = dir_ / "c.csv";
  o.verify = true;
  ASSERT_EQ(cmd_simulate(o, out, err), kExitOk) << err.str();
  EXPECT_EQ(read(dir_ / "a.csv"), read(dir_ / "b.csv"));
  EXPECT_EQ(read(dir_ / "a.csv"), read(dir_ / "c.csv"));
  EXPECT_FALSE(read(dir_ / "a.csv").empty());
}

TEST_F(CliTest, InputErrorsExitTwo) {
  std::ostringstream out, err;
  SimulateOptions o;
  o.workload = dir_ / "missing.json";
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
  o.workload = write("bad.json", "{\n  \"layers\": [\n    {\"ich\": }\n  ]\n}");
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
  EXPECT_NE(err.str().find("3:"), std::string::npos) << err.str();
  o.workload = write("shape.json", R"({"layers": [{"name": "s", "ich": 1, "och": 1, "h": 1, "w": 1, "kh": 2, "kw": 2}]})");
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
  o.workload = write("w.json", kSmall);
  o.area_ratio = 0;
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
  o.area_ratio = 0.5;
  o.config = write("t.json", R"({"classes": {"dc.p": {"latency": 0}}})");
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
}

TEST_F(CliTest, ConfigAndFrequencyOverrides) {
  SimulateOptions o;
  o.workload = write("w.json", kSmall);
  std::ostringstream base, slow, fast, err;
  ASSERT_EQ(cmd_simulate(o, base, err), kExitOk);
  o.config = write("t.json", R"({"memory_latency": 20, "baseline": {"c_mac": 3}})");
  ASSERT_EQ(cmd_simulate(o, slow, err), kExitOk);
  EXPECT_NE(base.str(), slow.str());
  const SimConfig cfg = load_config(o.config, 1e9);
  EXPECT_EQ(cfg.baseline.c_load, 20u);
  EXPECT_EQ(cfg.baseline.c_mac, 3u);
  EXPECT_DOUBLE_EQ(cfg.timing.freq_hz, 1e9);
}

TEST_F(CliTest, TraceOfNamedLayer) {
  SimulateOptions o;
  o.workload = write("w.json", kSmall);
  o.trace = dir_ / "trace.csv";
  o.trace_layer = "fc";
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(o, out, err), kExitOk) << err.str();
  const auto rows = lines(read(*o.trace));
  ASSERT_GT(rows.size(), 1u);
  EXPECT_EQ(rows[0], "cycle,class,mnemonic");
  o.trace_layer = "wide";
  EXPECT_EQ(cmd_simulate(o, out, err), kExitInputError);
}

TEST_F(CliTest, TilingSweepTilingFactors) {
  SweepOptions s;
  s.mode = SweepMode::Tiling;
  s.values = {32, 64, 128, 256};
  const auto pts = run_sweep(s);
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].tiling_factor, 1);
  EXPECT_EQ(pts[1].tiling_factor, 1);
  EXPECT_EQ(pts[2].tiling_factor, 2);
  EXPECT_EQ(pts[3].tiling_factor, 4);
  for (const auto& p : pts) EXPECT_EQ(p.och, 32);
}

TEST_F(CliTest, GroupingSweepGroupCounts) {
  SweepOptions s;
  s.mode = SweepMode::Grouping;
  s.values = {16, 32, 64};
  const auto pts = run_sweep(s);
  ASSERT_EQ(pts.size(), 3u);
  EXPECT_EQ(pts[0].group_count, 1);
  EXPECT_EQ(pts[1].group_count, 1);
  EXPECT_EQ(pts[2].group_count, 2);
  for (const auto& p : pts) EXPECT_EQ(p.ich, 32);
}

TEST_F(CliTest, SweepSpeedupNeverRisesAcrossSteps) {
  for (SweepMode mode : {SweepMode::Tiling, SweepMode::Grouping}) {
    SweepOptions s;
    s.mode = mode;
    s.values = default_sweep_values(mode);
    const auto pts = run_sweep(s);
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const bool step = mode == SweepMode::Tiling ? pts[i].tiling_factor > pts[i - 1].tiling_factor
                                                  : pts[i].group_count > pts[i - 1].group_count;
      if (step) EXPECT_LE(pts[i].speedup, pts[i - 1].speedup) << i;
      EXPECT_GT(pts[i].speedup, 1.0);
    }
  }
}

TEST_F(CliTest, SweepCsvAndInvalidRanges) {
  SweepOptions s;
  s.mode = SweepMode::Grouping;
  s.values = {8, 16};
  std::ostringstream out, err;
  ASSERT_EQ(cmd_sweep(s, out, err), kExitOk);
  const auto rows = lines(out.str());
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "param,value,ich,och,T,group_count,dimc_cycles,baseline_cycles,speedup,gops");
  EXPECT_EQ(rows[1].rfind("och,8,32,8,1,1,", 0), 0u);
  s.values = {};
  EXPECT_EQ(cmd_sweep(s, out, err), kExitInputError);
  s.values = {16, 8};
  EXPECT_EQ(cmd_sweep(s, out, err), kExitInputError);
  s.values = {0, 8};
  EXPECT_EQ(cmd_sweep(s, out, err), kExitInputError);
}

TEST_F(CliTest, AsmDisasmRoundTrip) {
  const fs::path src = write("p.s", "dl.i vs1=2 nvec=4 sec=1 mask=0b1111\ndc.f vs1=0 vd=31 sh=0 dh=0 m_row=3 bidx=1\n");
  std::ostringstream out, err;
  ASSERT_EQ(cmd_asm(src, std::nullopt, true, out, err), kExitOk);
  EXPECT_EQ(lines(out.str()).at(0), "1e71000b");
  ASSERT_EQ(cmd_asm(src, dir_ / "p.bin", false, out, err), kExitOk);
  std::ostringstream dis;
  ASSERT_EQ(cmd_disasm(dir_ / "p.bin", dis, err), kExitOk);
  EXPECT_EQ(dis.str(), read(src));

  std::ostringstream bad_err;
  EXPECT_EQ(cmd_asm(write("bad.s", "dl.i vs1=40 nvec=1 sec=0 mask=0\n"), std::nullopt, true, out, bad_err),
            kExitInputError);
  EXPECT_NE(bad_err.str().find("vs1"), std::string::npos);
}

TEST_F(CliTest, BundledResNet50) {
  SimulateOptions o;
  o.workload = fs::path(DIMCSIM_DATA_DIR) / "resnet50.json";
  o.format = ReportFormat::Json;
  std::ostringstream out, err;
  ASSERT_EQ(cmd_simulate(o, out, err), kExitOk) << err.str();
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_EQ(j["network"], "resnet50");
  ASSERT_EQ(j["layers"].size(), 54u);
  for (const auto& l : j["layers"]) EXPECT_GT(l["speedup"].get<double>(), 1.0) << l["layer"];
  EXPECT_TRUE(j["ineligible"].empty());
}
