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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "dimcsim/timing.hpp"

namespace dimcsim {

// Area_baseline / Area_DIMC back-solved from a 217x speedup pairing with a
// 50x area-normalized speedup.
inline constexpr double kDefaultAreaRatio = 50.0 / 217.0;

// Giga-operations per second: ops / (cycles / freq) / 1e9.
// Throws Errc::UndefinedRate when cycles == 0.
double gops(std::uint64_t ops, std::uint64_t cycles, double freq_hz);

// baseline / dimc. Throws Errc::ZeroDenominator when dimc_cycles == 0.
double speedup(double baseline_cycles, double dimc_cycles);

// speedup * area_ratio. Throws Errc::NonPositiveRatio unless area_ratio > 0.
double ans(double speedup, double area_ratio);

// Upper bound on gops for a given element width: 2 * (1024 / bits) MACs per cycle.
double peak_gops(int bits, double freq_hz);

struct PerfReport {
  std::string layer;
  std::uint64_t total_ops = 0;
  std::uint64_t dimc_cycles = 0;
  std::uint64_t baseline_cycles = 0;
  double gops = 0;
  double speedup = 0;
  double ans = 0;
  double area_ratio = kDefaultAreaRatio;
  std::array<double, kOpClasses> fractions{};  // computing, loading, storing
};

PerfReport make_report(std::string layer, std::uint64_t ops, const CycleStats& dimc, std::uint64_t baseline_cycles,
                       double area_ratio, double freq_hz);

// Fixed column order:
// layer,total_ops,dimc_cycles,baseline_cycles,gops,speedup,ans,area_ratio,
// frac_computing,frac_loading,frac_storing
void write_reports_csv(std::ostream& out, std::span<const PerfReport> reports);
nlohmann::json to_json(const PerfReport& report);
void write_reports_json(std::ostream& out, std::string_view network, std::span<const PerfReport> reports);

}  // namespace dimcsim
