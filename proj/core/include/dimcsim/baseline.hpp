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

#include <nlohmann/json_fwd.hpp>

#include "dimcsim/layer.hpp"
#include "dimcsim/timing.hpp"

namespace dimcsim {

// Analytic INT8 cost of a layer on the plain vector core. Per output
// element: ceil(ICH*KH*KW / lanes) vector load + MAC steps, one reduction
// and one store.
struct BaselineCostConfig {
  int lanes_int8 = 8;  // VLEN / 8
  std::uint64_t c_load = 8;
  std::uint64_t c_mac = 1;
  std::uint64_t c_reduce = 4;
  std::uint64_t c_store = 8;

  // Load and store costs follow the timing model's memory latency.
  static BaselineCostConfig from_timing(const TimingModel& timing);
  void validate() const;

  friend bool operator==(const BaselineCostConfig&, const BaselineCostConfig&) = default;
};

// OCH*OH*OW * (ceil(ICH*KH*KW / lanes) * (c_load + c_mac) + c_reduce + c_store).
std::uint64_t baseline_cycles(const LayerDescriptor& layer, const BaselineCostConfig& cfg = {});

// Keys: lanes_int8, c_load, c_mac, c_reduce, c_store; all optional.
BaselineCostConfig baseline_from_json(const nlohmann::json& j, BaselineCostConfig base = {});

}  // namespace dimcsim
