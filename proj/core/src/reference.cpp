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

#include "dimcsim/reference.hpp"

namespace dimcsim {

namespace {

std::uniform_int_distribution<std::int32_t> element_dist(int bits, bool is_signed) {
  if (is_signed) return std::uniform_int_distribution<std::int32_t>(-(1 << (bits - 1)), (1 << (bits - 1)) - 1);
  return std::uniform_int_distribution<std::int32_t>(0, (1 << bits) - 1);
}

}  // namespace

FeatureMap reference_conv(const LayerDescriptor& layer, const KernelSet& weights, const FeatureMap& input,
                          FinalMode mode, const QuantConfig& quant) {
  const int OH = layer.out_h(), OW = layer.out_w();
  FeatureMap out(layer.och, OH, OW);
  for (int o = 0; o < layer.och; ++o)
    for (int oy = 0; oy < OH; ++oy)
      for (int ox = 0; ox < OW; ++ox) {
        std::int64_t acc = 0;
        for (int c = 0; c < layer.ich; ++c)
          for (int ky = 0; ky < layer.kh; ++ky)
            for (int kx = 0; kx < layer.kw; ++kx) {
              const int y = oy * layer.stride - layer.padding + ky;
              const int x = ox * layer.stride - layer.padding + kx;
              if (y < 0 || y >= layer.h || x < 0 || x >= layer.w) continue;
              acc += std::int64_t{weights.at(o, c, ky, kx)} * input.at(c, y, x);
            }
        const PartialSum p = PartialSum::wrap(acc);
        out.at(o, oy, ox) = mode == FinalMode::Partial ? p.value() : quantize(p, quant);
      }
  return out;
}

KernelSet random_weights(const LayerDescriptor& layer, std::mt19937_64& rng) {
  KernelSet k(layer.och, layer.ich, layer.kh, layer.kw);
  auto dist = element_dist(layer.precision.bits, layer.precision.weight_signed);
  for (auto& v : k.data) v = dist(rng);
  return k;
}

FeatureMap random_input(const LayerDescriptor& layer, std::mt19937_64& rng) {
  FeatureMap f(layer.ich, layer.h, layer.w);
  auto dist = element_dist(layer.precision.bits, layer.precision.input_signed);
  for (auto& v : f.data) v = dist(rng);
  return f;
}

}  // namespace dimcsim
