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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dimcsim/baseline.hpp"
#include "dimcsim/metrics.hpp"
#include "dimcsim/timing.hpp"

namespace dimcsim::cli {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitInputError = 2 };

enum class ReportFormat { Csv, Json };

// Timing table plus baseline constants. The config file is the timing JSON
// with an optional "baseline" object; baseline load/store costs follow the
// memory latency unless set explicitly.
struct SimConfig {
  TimingModel timing;
  BaselineCostConfig baseline;
};

SimConfig load_config(const std::optional<std::filesystem::path>& path, std::optional<double> freq_hz);

struct SimulateOptions {
  std::filesystem::path workload;
  std::optional<std::filesystem::path> config;
  std::optional<double> freq_hz;
  double area_ratio = kDefaultAreaRatio;
  bool verify = false;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> trace;
  std::optional<std::string> trace_layer;  // first eligible layer when unset
  ReportFormat format = ReportFormat::Csv;
  std::optional<std::filesystem::path> output;  // `out` when unset
  unsigned jobs = 1;
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

enum class SweepMode { Tiling, Grouping };

struct SweepOptions {
  SweepMode mode = SweepMode::Tiling;
  std::vector<int> values;  // ICH (tiling) or OCH (grouping), strictly increasing
  int fixed_channels = 32;  // OCH (tiling) or ICH (grouping)
  int kernel = 2;
  int h = 16, w = 16;
  int bits = 4;
  std::optional<std::filesystem::path> config;
  std::optional<double> freq_hz;
  double area_ratio = kDefaultAreaRatio;
  std::optional<std::filesystem::path> output;
};

struct SweepPoint {
  int ich = 0, och = 0;
  int tiling_factor = 0, group_count = 0;
  std::uint64_t dimc_cycles = 0, baseline_cycles = 0;
  double speedup = 0, gops = 0;
};

std::vector<int> default_sweep_values(SweepMode mode);
std::vector<SweepPoint> run_sweep(const SweepOptions& opts);
void write_sweep_csv(std::ostream& out, SweepMode mode, const std::vector<SweepPoint>& points);

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

int cmd_asm(const std::filesystem::path& input, const std::optional<std::filesystem::path>& output, bool hex,
            std::ostream& out, std::ostream& err);
int cmd_disasm(const std::filesystem::path& input, std::ostream& out, std::ostream& err);

}  // namespace dimcsim::cli
