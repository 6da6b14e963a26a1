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

#include "dimcsim/metrics.hpp"

#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dimcsim/error.hpp"

namespace dimcsim {

double gops(std::uint64_t ops, std::uint64_t cycles, double freq_hz) {
  if (cycles == 0) throw Error(Errc::UndefinedRate, "throughput is undefined for zero cycles");
  if (!(freq_hz > 0)) throw Error(Errc::InvalidArgument, fmt::format("clock frequency must be positive, got {}", freq_hz));
  const double seconds = static_cast<double>(cycles) / freq_hz;
  return static_cast<double>(ops) / seconds / 1e9;
}

double speedup(double baseline_cycles, double dimc_cycles) {
  if (dimc_cycles == 0) throw Error(Errc::ZeroDenominator, "speedup is undefined for zero DIMC cycles");
  return baseline_cycles / dimc_cycles;
}

double ans(double speedup_value, double area_ratio) {
  if (!(area_ratio > 0)) throw Error(Errc::NonPositiveRatio, fmt::format("area ratio must be positive, got {}", area_ratio));
  return speedup_value * area_ratio;
}

double peak_gops(int bits, double freq_hz) { return 2.0 * (1024.0 / bits) * freq_hz / 1e9; }

PerfReport make_report(std::string layer, std::uint64_t ops, const CycleStats& dimc, std::uint64_t baseline,
                       double area_ratio, double freq_hz) {
  PerfReport r;
  r.layer = std::move(layer);
  r.total_ops = ops;
  r.dimc_cycles = dimc.total_cycles;
  r.baseline_cycles = baseline;
  r.gops = gops(ops, dimc.total_cycles, freq_hz);
  r.speedup = speedup(static_cast<double>(baseline), static_cast<double>(dimc.total_cycles));
  r.ans = ans(r.speedup, area_ratio);
  r.area_ratio = area_ratio;
  for (int c = 0; c < kOpClasses; ++c)
    r.fractions[c] = static_cast<double>(dimc.class_cycles[c]) / static_cast<double>(dimc.total_cycles);
  return r;
}

void write_reports_csv(std::ostream& out, std::span<const PerfReport> reports) {
  out << "layer,total_ops,dimc_cycles,baseline_cycles,gops,speedup,ans,area_ratio,"
         "frac_computing,frac_loading,frac_storing\n";
  for (const PerfReport& r : reports)
    out << fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.9f},{:.6f},{:.6f},{:.6f}\n", r.layer, r.total_ops,
                       r.dimc_cycles, r.baseline_cycles, r.gops, r.speedup, r.ans, r.area_ratio, r.fractions[0],
                       r.fractions[1], r.fractions[2]);
}

nlohmann::json to_json(const PerfReport& r) {
  return {{"layer", r.layer},
          {"total_ops", r.total_ops},
          {"dimc_cycles", r.dimc_cycles},
          {"baseline_cycles", r.baseline_cycles},
          {"gops", r.gops},
          {"speedup", r.speedup},
          {"ans", r.ans},
          {"area_ratio", r.area_ratio},
          {"fractions", {{"computing", r.fractions[0]}, {"loading", r.fractions[1]}, {"storing", r.fractions[2]}}}};
}

void write_reports_json(std::ostream& out, std::string_view network, std::span<const PerfReport> reports) {
  nlohmann::json j;
  j["network"] = network;
  j["layers"] = nlohmann::json::array();
  for (const PerfReport& r : reports) j["layers"].push_back(to_json(r));
  out << j.dump(2) << '\n';
}

}  // namespace dimcsim
