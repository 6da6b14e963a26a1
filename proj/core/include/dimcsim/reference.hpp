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
#include <random>

#include "dimcsim/dimc_tile.hpp"
#include "dimcsim/layer.hpp"
#include "dimcsim/lowering.hpp"

namespace dimcsim {

// Direct integer convolution, reduced to the 24-bit partial range and, for
// quantized flows, passed through ReLU/shift/saturate. Used by `--verify`.
FeatureMap reference_conv(const LayerDescriptor& layer, const KernelSet& weights, const FeatureMap& input,
                          FinalMode mode, const QuantConfig& quant = {});

// Uniformly random tensors within the layer's element range.
KernelSet random_weights(const LayerDescriptor& layer, std::mt19937_64& rng);
FeatureMap random_input(const LayerDescriptor& layer, std::mt19937_64& rng);

}  // namespace dimcsim
