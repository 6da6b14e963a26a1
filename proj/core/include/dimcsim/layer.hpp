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
#include <string>
#include <vector>

#include "dimcsim/dimc_tile.hpp"

namespace dimcsim {

enum class LayerKind { Conv, FullyConnected };

// Precision of a workload layer. Unlike PrecisionMode, any width may be
// described here; only 1, 2 and 4 bits are DIMC-eligible.
struct LayerPrecision {
  int bits = 4;
  bool input_signed = true;
  bool weight_signed = true;
  friend bool operator==(const LayerPrecision&, const LayerPrecision&) = default;
};

// Convolution layer shape. A fully-connected layer is a convolution with
// H = W = KH = KW = 1 over ICH flattened input features.
struct LayerDescriptor {
  std::string name;
  LayerKind kind = LayerKind::Conv;
  int ich = 1, och = 1;
  int h = 1, w = 1;
  int kh = 1, kw = 1;
  int stride = 1, padding = 0;
  LayerPrecision precision;

  static LayerDescriptor fc(std::string name, int in_features, int out_features, LayerPrecision precision = {});

  int out_h() const;
  int out_w() const;
  std::int64_t positions() const { return std::int64_t{out_h()} * out_w(); }
  std::int64_t kernel_elements() const { return std::int64_t{ich} * kh * kw; }

  // Throws Errc::MalformedLayer for non-positive dims, negative padding,
  // a window that does not fit, or an fc layer with spatial extent.
  void validate() const;
  // Throws Errc::NotEligible when the precision exceeds 4 bits; a width that
  // is not 1, 2 or 4 (but within 4) is malformed.
  PrecisionMode dimc_precision() const;

  friend bool operator==(const LayerDescriptor&, const LayerDescriptor&) = default;
};

// Multiply and add of every MAC: 2 * OCH * OH * OW * ICH * KH * KW.
std::uint64_t ops_count(const LayerDescriptor& layer);

// Analytic instruction counts of the lowered stream for the whole layer.
struct InstructionBudget {
  std::uint64_t dl_m = 0;
  std::uint64_t dl_i = 0;
  std::uint64_t compute = 0;
  std::uint64_t vector_loads = 0;
  std::uint64_t vector_stores = 0;
  friend bool operator==(const InstructionBudget&, const InstructionBudget&) = default;
};

struct MappingPlan {
  std::int64_t kernel_elements = 0;
  std::int64_t kernel_bits = 0;
  int elements_per_row = 0;
  int tiling_factor = 1;       // rows per kernel
  int kernels_per_group = 32;  // kernels resident in the tile at once
  int group_count = 1;
  std::int64_t positions = 0;  // output pixels
  PrecisionMode precision;

  bool tiled() const { return tiling_factor > 1; }
  bool grouped() const { return group_count > 1; }

  // Elements, sectors and 64-bit slices used by chunk t of a kernel. The
  // flattened kernel is split into 1024-bit chunks; the last one may be short.
  int chunk_elements(int chunk) const;
  int chunk_sectors(int chunk) const;
  int chunk_slices(int chunk, int sector) const;
  int group_size(int group, int och) const;

  InstructionBudget budget(int och, int output_registers) const;

  friend bool operator==(const MappingPlan&, const MappingPlan&) = default;
};

// T = ceil(kernel_bits / 1024), G = floor(32 / T), groups = ceil(OCH / G).
// Throws Errc::NotEligible for precision above 4 bits.
MappingPlan plan_mapping(const LayerDescriptor& layer);

// Activations are ICH x H x W, weights OCH x ICH x KH x KW and results
// OCH x OH x OW, all row-major.
struct FeatureMap {
  int channels = 0, height = 0, width = 0;
  std::vector<std::int32_t> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w) : channels(c), height(h), width(w), data(std::size_t(c) * h * w, 0) {}
  std::int32_t& at(int c, int y, int x) { return data[(std::size_t(c) * height + y) * width + x]; }
  std::int32_t at(int c, int y, int x) const { return data[(std::size_t(c) * height + y) * width + x]; }
  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;
};

struct KernelSet {
  int och = 0, ich = 0, kh = 0, kw = 0;
  std::vector<std::int32_t> data;

  KernelSet() = default;
  KernelSet(int o, int c, int y, int x) : och(o), ich(c), kh(y), kw(x), data(std::size_t(o) * c * y * x, 0) {}
  std::int32_t& at(int o, int c, int y, int x) { return data[((std::size_t(o) * ich + c) * kh + y) * kw + x]; }
  std::int32_t at(int o, int c, int y, int x) const { return data[((std::size_t(o) * ich + c) * kh + y) * kw + x]; }
};

}  // namespace dimcsim
