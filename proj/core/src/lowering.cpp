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

#include "dimcsim/lowering.hpp"

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

constexpr std::uint64_t kChunkBytes = kRowBits / 8;
constexpr std::uint64_t kSectorBytes = kSectorBits / 8;
constexpr std::uint64_t kSliceBytes = kSliceBits / 8;
constexpr int kStagingBase = 1;
constexpr int kZeroReg = 0;

struct HalfSlot {
  int reg = 0;
  int half = 0;
};

std::uint8_t u8(int v) { return static_cast<std::uint8_t>(v); }

int ceil_div(int a, int b) { return (a + b - 1) / b; }

class Emitter {
 public:
  Emitter(const LoweredLayer& l) : l_(l), plan_(l.plan), regs_(l.regs) {}

  Block weight_block(int group) const {
    Block b;
    const int n = plan_.group_size(group, l_.layer.och);
    for (int k = 0; k < n; ++k) {
      const int o = group * plan_.kernels_per_group + k;
      for (int t = 0; t < plan_.tiling_factor; ++t) {
        const std::uint64_t chunk = (std::uint64_t(o) * plan_.tiling_factor + t) * kChunkBytes;
        load_chunk(b, t, chunk, 0);
        for (int s = 0; s < plan_.chunk_sectors(t); ++s) {
          const int nvec = plan_.chunk_slices(t, s);
          push(b, DlM{u8(kStagingBase + 4 * s), u8(nvec), u8(s), u8((1 << nvec) - 1), u8(k * plan_.tiling_factor + t)});
        }
      }
    }
    return b;
  }

  // One output position. `prev_stores` stores the previous position's
  // results right after the first patch loads; `own_stores` stores this
  // position's results at the end.
  Block position_block(int group, std::int64_t position, bool prev_stores, bool own_stores) const {
    Block b;
    const int n = plan_.group_size(group, l_.layer.och);
    const int T = plan_.tiling_factor;
    const auto patch_stride = static_cast<std::int64_t>(T * kChunkBytes);
    for (int t = 0; t < T; ++t) {
      const std::uint64_t chunk = l_.memory.patch_base + (std::uint64_t(position) * T + t) * kChunkBytes;
      load_chunk(b, t, chunk, patch_stride);
      if (t == 0 && prev_stores) store_results(b, group, position - 1);
      for (int s = 0; s < plan_.chunk_sectors(t); ++s) {
        const int nvec = plan_.chunk_slices(t, s);
        push(b, DlI{u8(kStagingBase + 4 * s), u8(nvec), u8(s), u8((1 << nvec) - 1)});
      }
      for (int k = 0; k < n; ++k) {
        const int row = k * T + t;
        const HalfSlot in = t == 0 ? HalfSlot{kZeroReg, 0} : chain_slot(k);
        if (l_.options.final_mode == FinalMode::Quantized && t == T - 1) {
          const int byte = k / 2;
          push(b, DcF{u8(in.reg), u8(regs_.out_base + byte / 8), u8(in.half), u8((byte % 8) / 4), u8(row), u8(byte % 4)});
        } else {
          const HalfSlot out = chain_slot(k);
          push(b, DcP{u8(in.reg), u8(out.reg), u8(in.half), u8(out.half), u8(row)});
        }
      }
    }
    if (own_stores) store_results(b, group, position);
    return b;
  }

  Block store_block(int group, std::int64_t position) const {
    Block b;
    store_results(b, group, position);
    return b;
  }

 private:
  static void push(Block& b, Instruction instr, std::int64_t stride = 0) {
    b.body.push_back(instr);
    b.strides.push_back(stride);
  }

  void load_chunk(Block& b, int chunk_index, std::uint64_t chunk_addr, std::int64_t stride) const {
    for (int s = 0; s < plan_.chunk_sectors(chunk_index); ++s)
      for (int j = 0; j < plan_.chunk_slices(chunk_index, s); ++j)
        push(b, VectorLoad{u8(kStagingBase + 4 * s + j), chunk_addr + s * kSectorBytes + j * kSliceBytes}, stride);
  }

  void store_results(Block& b, int group, std::int64_t position) const {
    const std::uint64_t base =
        l_.memory.out_base + (std::uint64_t(group) * plan_.positions + std::uint64_t(position)) * l_.memory.out_bytes;
    for (int r = 0; r < regs_.out_regs; ++r)
      push(b, VectorStore{u8(regs_.out_base + r), base + r * kSliceBytes}, static_cast<std::int64_t>(l_.memory.out_bytes));
  }

  HalfSlot chain_slot(int k) const { return {regs_.chain_base + k / 2, k % 2}; }

  const LoweredLayer& l_;
  const MappingPlan& plan_;
  const RegisterMap& regs_;
};

void check_range(std::int32_t v, const PrecisionMode& mode, bool is_signed, const char* what) {
  const int bits = mode.bits;
  const std::int32_t lo = is_signed ? -(1 << (bits - 1)) : 0;
  const std::int32_t hi = is_signed ? (1 << (bits - 1)) - 1 : (1 << bits) - 1;
  if (v < lo || v > hi)
    throw Error(Errc::InvalidArgument,
                fmt::format("{} value {} outside the {}-bit {} range [{}, {}]", what, v, bits,
                            is_signed ? "signed" : "unsigned", lo, hi));
}

void pack_element(std::span<std::uint8_t> bytes, std::uint64_t chunk_addr, int element, int bits, std::int32_t value) {
  const std::uint64_t bit = std::uint64_t(element) * bits;
  const auto field = static_cast<std::uint8_t>(static_cast<std::uint32_t>(value) & ((1u << bits) - 1));
  bytes[chunk_addr + bit / 8] |= static_cast<std::uint8_t>(field << (bit % 8));
}

}  // namespace

LoweredLayer lower(const LayerDescriptor& layer, const MappingPlan& plan, const LowerOptions& options) {
  const MappingPlan expected = plan_mapping(layer);
  if (!(expected == plan))
    throw Error(Errc::PlanMismatch, fmt::format("layer '{}': mapping plan was not produced for this layer", layer.name));
  options.quant.validate();

  LoweredLayer l;
  l.layer = layer;
  l.plan = plan;
  l.options = options;
  l.config = {plan.precision, options.quant};

  const int G = plan.kernels_per_group;
  const int T = plan.tiling_factor;
  RegisterMap& r = l.regs;
  r.staging_regs = 4 * plan.chunk_sectors(0);
  if (options.final_mode == FinalMode::Partial) {
    r.out_regs = ceil_div(G, 2);
    r.out_base = kVectorRegs - r.out_regs;
    r.chain_base = r.out_base;
    r.chain_regs = r.out_regs;
  } else {
    r.out_regs = ceil_div(ceil_div(G, 2), 8);
    r.out_base = kVectorRegs - r.out_regs;
    r.chain_regs = T > 1 ? ceil_div(G, 2) : 0;
    r.chain_base = r.out_base - r.chain_regs;
  }
  // Results may wait in their registers while the next patch streams into
  // staging only if the two never overlap.
  r.deferred_stores = r.out_base > kStagingBase + r.staging_regs - 1 && r.chain_base > kStagingBase + r.staging_regs - 1;

  const auto P = static_cast<std::uint64_t>(plan.positions);
  l.memory.patch_base = std::uint64_t(layer.och) * T * kChunkBytes;
  l.memory.out_base = l.memory.patch_base + P * T * kChunkBytes;
  l.memory.out_bytes = std::uint64_t(r.out_regs) * kSliceBytes;
  l.memory.memory_bytes = l.memory.out_base + std::uint64_t(plan.group_count) * P * l.memory.out_bytes;

  Emitter emit(l);
  for (int g = 0; g < plan.group_count; ++g) {
    l.program.blocks.push_back(emit.weight_block(g));
    if (r.deferred_stores) {
      l.program.blocks.push_back(emit.position_block(g, 0, false, false));
      if (P > 1) {
        Block steady = emit.position_block(g, 1, true, false);
        steady.count = P - 1;
        l.program.blocks.push_back(std::move(steady));
      }
      l.program.blocks.push_back(emit.store_block(g, static_cast<std::int64_t>(P) - 1));
    } else {
      Block body = emit.position_block(g, 0, false, true);
      body.count = P;
      l.program.blocks.push_back(std::move(body));
    }
  }
  return l;
}

MemoryImage build_memory_image(const LoweredLayer& lowered, const KernelSet& weights, const FeatureMap& input) {
  const LayerDescriptor& L = lowered.layer;
  const MappingPlan& plan = lowered.plan;
  const PrecisionMode& mode = plan.precision;
  if (weights.och != L.och || weights.ich != L.ich || weights.kh != L.kh || weights.kw != L.kw)
    throw Error(Errc::InvalidArgument, fmt::format("layer '{}': weight tensor {}x{}x{}x{} does not match the layer", L.name,
                                                   weights.och, weights.ich, weights.kh, weights.kw));
  if (input.channels != L.ich || input.height != L.h || input.width != L.w)
    throw Error(Errc::InvalidArgument, fmt::format("layer '{}': input tensor {}x{}x{} does not match the layer", L.name,
                                                   input.channels, input.height, input.width));
  for (auto v : weights.data) check_range(v, mode, mode.weight_signed, "weight");
  for (auto v : input.data) check_range(v, mode, mode.input_signed, "activation");

  MemoryImage image(lowered.memory.memory_bytes);
  auto bytes = image.bytes();
  const int T = plan.tiling_factor;
  const int E = plan.elements_per_row;
  const int taps = L.kh * L.kw;

  for (int o = 0; o < L.och; ++o)
    for (std::int64_t e = 0; e < plan.kernel_elements; ++e) {
      const int c = static_cast<int>(e / taps), ky = static_cast<int>(e / L.kw % L.kh), kx = static_cast<int>(e % L.kw);
      const std::uint64_t chunk = (std::uint64_t(o) * T + e / E) * kChunkBytes;
      pack_element(bytes, chunk, static_cast<int>(e % E), mode.bits, weights.at(o, c, ky, kx));
    }

  const int OW = L.out_w();
  for (std::int64_t p = 0; p < plan.positions; ++p) {
    const int oy = static_cast<int>(p / OW), ox = static_cast<int>(p % OW);
    for (std::int64_t e = 0; e < plan.kernel_elements; ++e) {
      const int c = static_cast<int>(e / taps), ky = static_cast<int>(e / L.kw % L.kh), kx = static_cast<int>(e % L.kw);
      const int y = oy * L.stride - L.padding + ky, x = ox * L.stride - L.padding + kx;
      if (y < 0 || y >= L.h || x < 0 || x >= L.w) continue;
      const std::uint64_t chunk = lowered.memory.patch_base + (std::uint64_t(p) * T + e / E) * kChunkBytes;
      pack_element(bytes, chunk, static_cast<int>(e % E), mode.bits, input.at(c, y, x));
    }
  }
  return image;
}

FeatureMap extract_outputs(const LoweredLayer& lowered, const MemoryImage& memory) {
  const LayerDescriptor& L = lowered.layer;
  const MappingPlan& plan = lowered.plan;
  FeatureMap out(L.och, L.out_h(), L.out_w());
  const int OW = L.out_w();
  for (int o = 0; o < L.och; ++o) {
    const int g = o / plan.kernels_per_group, k = o % plan.kernels_per_group;
    for (std::int64_t p = 0; p < plan.positions; ++p) {
      const std::uint64_t base =
          lowered.memory.out_base + (std::uint64_t(g) * plan.positions + std::uint64_t(p)) * lowered.memory.out_bytes;
      std::int32_t value = 0;
      if (lowered.options.final_mode == FinalMode::Partial) {
        const std::uint64_t word = memory.read64(base + std::uint64_t(k / 2) * kSliceBytes);
        value = static_cast<std::int32_t>(static_cast<std::uint32_t>(word >> (32 * (k % 2))));
      } else {
        const std::uint8_t byte = memory.byte(base + std::uint64_t(k / 2));
        value = (byte >> (4 * (k % 2))) & 0x0f;
      }
      out.at(o, static_cast<int>(p / OW), static_cast<int>(p % OW)) = value;
    }
  }
  return out;
}

LayerRun run_layer(const LoweredLayer& lowered, MemoryImage memory, const TimingModel& timing,
                   const ExecOptions& options) {
  if (memory.size() < lowered.memory.memory_bytes)
    throw Error(Errc::InvalidArgument, fmt::format("memory image of {} bytes is smaller than the layer layout ({} bytes)",
                                                   memory.size(), lowered.memory.memory_bytes));
  LayerRun run;
  run.outcome = execute(lowered.program, timing, std::move(memory), lowered.config, options);
  run.output = extract_outputs(lowered, run.outcome.memory);
  return run;
}

}  // namespace dimcsim
