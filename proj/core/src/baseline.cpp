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

#include "dimcsim/baseline.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dimcsim/error.hpp"

namespace dimcsim {

BaselineCostConfig BaselineCostConfig::from_timing(const TimingModel& timing) {
  BaselineCostConfig cfg;
  cfg.c_load = timing.memory_latency;
  cfg.c_store = timing.memory_latency;
  return cfg;
}

void BaselineCostConfig::validate() const {
  if (lanes_int8 < 1) throw Error(Errc::InvalidArgument, fmt::format("lanes_int8 must be >= 1, got {}", lanes_int8));
}

std::uint64_t baseline_cycles(const LayerDescriptor& layer, const BaselineCostConfig& cfg) {
  layer.validate();
  cfg.validate();
  const auto k = static_cast<std::uint64_t>(layer.kernel_elements());
  const auto lanes = static_cast<std::uint64_t>(cfg.lanes_int8);
  const std::uint64_t per_output = (k + lanes - 1) / lanes * (cfg.c_load + cfg.c_mac) + cfg.c_reduce + cfg.c_store;
  return static_cast<std::uint64_t>(layer.och) * static_cast<std::uint64_t>(layer.positions()) * per_output;
}

BaselineCostConfig baseline_from_json(const nlohmann::json& j, BaselineCostConfig cfg) {
  try {
    if (j.contains("lanes_int8")) cfg.lanes_int8 = j.at("lanes_int8").get<int>();
    if (j.contains("c_load")) cfg.c_load = j.at("c_load").get<std::uint64_t>();
    if (j.contains("c_mac")) cfg.c_mac = j.at("c_mac").get<std::uint64_t>();
    if (j.contains("c_reduce")) cfg.c_reduce = j.at("c_reduce").get<std::uint64_t>();
    if (j.contains("c_store")) cfg.c_store = j.at("c_store").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, fmt::format("baseline config: {}", e.what()));
  }
  cfg.validate();
  return cfg;
}

}  // namespace dimcsim
