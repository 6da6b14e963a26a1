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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dimcsim/dimc_tile.hpp"
#include "dimcsim/layer.hpp"

namespace dimcsim {

struct WorkloadLayer {
  LayerDescriptor layer;
  QuantConfig quant;
};

// A network as an ordered list of layers.
//
//   {"network": "resnet50",
//    "precision": {"bits": 4, "input_signed": false, "weight_signed": true},
//    "quant": {"right_shift": 6},
//    "layers": [{"name": "conv1", "kind": "conv", "ich": 3, "och": 64, "h": 224, "w": 224,
//                "kh": 7, "kw": 7, "stride": 2, "padding": 3}, ...]}
//
// Layer entries may override any precision or quant key. fc entries only need
// ich and och. Shapes are validated while parsing; precision eligibility is
// left to the mapper.
struct WorkloadFile {
  std::string network;
  std::vector<WorkloadLayer> layers;
};

// Throws Errc::Parse with "line:column" for JSON syntax errors and the entry
// index and name for bad entries; Errc::MalformedLayer for invalid shapes.
WorkloadFile parse_workload(std::string_view text);
WorkloadFile load_workload(const std::filesystem::path& path);

}  // namespace dimcsim
