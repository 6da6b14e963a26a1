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

#include "dimcsim/layer.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return (a + b - 1) / b; }

}  // namespace

LayerDescriptor LayerDescriptor::fc(std::string name, int in_features, int out_features, LayerPrecision precision) {
  LayerDescriptor d;
  d.name = std::move(name);
  d.kind = LayerKind::FullyConnected;
  d.ich = in_features;
  d.och = out_features;
  d.precision = precision;
  return d;
}

int LayerDescriptor::out_h() const { return (h + 2 * padding - kh) / stride + 1; }
int LayerDescriptor::out_w() const { return (w + 2 * padding - kw) / stride + 1; }

void LayerDescriptor::validate() const {
  const auto bad = [this](const std::string& why) {
    throw Error(Errc::MalformedLayer, fmt::format("layer '{}': {}", name, why));
  };
  if (ich < 1 || och < 1) bad(fmt::format("channel counts must be >= 1 (ich={}, och={})", ich, och));
  if (h < 1 || w < 1) bad(fmt::format("input dims must be >= 1 (h={}, w={})", h, w));
  if (kh < 1 || kw < 1) bad(fmt::format("kernel dims must be >= 1 (kh={}, kw={})", kh, kw));
  if (stride < 1) bad(fmt::format("stride must be >= 1, got {}", stride));
  if (padding < 0) bad(fmt::format("padding must be >= 0, got {}", padding));
  if (h + 2 * padding < kh || w + 2 * padding < kw)
    bad(fmt::format("{}x{} kernel does not fit {}x{} input with padding {}", kh, kw, h, w, padding));
  if (kind == LayerKind::FullyConnected && (h != 1 || w != 1 || kh != 1 || kw != 1 || stride != 1 || padding != 0))
    bad("fully-connected layers must have unit spatial extent");
  if (precision.bits < 1) bad(fmt::format("precision must be >= 1 bit, got {}", precision.bits));
}

PrecisionMode LayerDescriptor::dimc_precision() const {
  if (precision.bits > 4)
    throw Error(Errc::NotEligible,
                fmt::format("layer '{}': {}-bit precision exceeds the 4-bit DIMC limit", name, precision.bits));
  if (precision.bits != 1 && precision.bits != 2 && precision.bits != 4)
    throw Error(Errc::MalformedLayer,
                fmt::format("layer '{}': {}-bit elements are not supported (1, 2 or 4)", name, precision.bits));
  return {precision.bits, precision.input_signed, precision.weight_signed};
}

std::uint64_t ops_count(const LayerDescriptor& layer) {
  layer.validate();
  return 2ull * static_cast<std::uint64_t>(layer.och) * static_cast<std::uint64_t>(layer.positions()) *
         static_cast<std::uint64_t>(layer.kernel_elements());
}

int MappingPlan::chunk_elements(int chunk) const {
  const std::int64_t rest = kernel_elements - std::int64_t{chunk} * elements_per_row;
  return static_cast<int>(std::clamp<std::int64_t>(rest, 0, elements_per_row));
}

int MappingPlan::chunk_sectors(int chunk) const {
  return static_cast<int>(ceil_div(std::int64_t{chunk_elements(chunk)} * precision.bits, kSectorBits));
}

int MappingPlan::chunk_slices(int chunk, int sector) const {
  const std::int64_t bits = std::int64_t{chunk_elements(chunk)} * precision.bits - std::int64_t{sector} * kSectorBits;
  return static_cast<int>(ceil_div(std::clamp<std::int64_t>(bits, 0, kSectorBits), kSliceBits));
}

int MappingPlan::group_size(int group, int och) const {
  return std::min(kernels_per_group, och - group * kernels_per_group);
}

InstructionBudget MappingPlan::budget(int och, int output_registers) const {
  std::uint64_t sectors = 0, slices = 0;
  for (int t = 0; t < tiling_factor; ++t) {
    sectors += chunk_sectors(t);
    for (int s = 0; s < chunk_sectors(t); ++s) slices += chunk_slices(t, s);
  }
  const auto P = static_cast<std::uint64_t>(positions);
  const auto G = static_cast<std::uint64_t>(group_count);
  const auto O = static_cast<std::uint64_t>(och);
  InstructionBudget b;
  b.dl_m = O * sectors;
  b.dl_i = G * P * sectors;
  b.compute = O * P * static_cast<std::uint64_t>(tiling_factor);
  b.vector_loads = O * slices + G * P * slices;
  b.vector_stores = G * P * static_cast<std::uint64_t>(output_registers);
  return b;
}

MappingPlan plan_mapping(const LayerDescriptor& layer) {
  layer.validate();
  MappingPlan plan;
  plan.precision = layer.dimc_precision();
  plan.kernel_elements = layer.kernel_elements();
  plan.kernel_bits = plan.kernel_elements * plan.precision.bits;
  plan.elements_per_row = plan.precision.elements_per_row();
  plan.tiling_factor = static_cast<int>(ceil_div(plan.kernel_bits, kRowBits));
  if (plan.tiling_factor > kTileRows)
    throw Error(Errc::NotEligible, fmt::format("layer '{}': kernel of {} bits needs {} rows, more than the tile holds",
                                               layer.name, plan.kernel_bits, plan.tiling_factor));
  plan.kernels_per_group = kTileRows / plan.tiling_factor;
  plan.group_count = static_cast<int>(ceil_div(layer.och, plan.kernels_per_group));
  plan.positions = layer.positions();
  return plan;
}

}  // namespace dimcsim
