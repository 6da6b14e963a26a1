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

#include "dimcsim/core_sim.hpp"
#include "dimcsim/layer.hpp"
#include "dimcsim/program.hpp"

namespace dimcsim {

// How each kernel's accumulation chain terminates.
enum class FinalMode {
  Quantized,  // DC.F: ReLU + requantized nibbles packed two per byte
  Partial,    // DC.P: raw 24-bit partials, one per 32-bit register half
};

struct LowerOptions {
  FinalMode final_mode = FinalMode::Quantized;
  QuantConfig quant;
};

// Where everything lives in the memory image of a lowered layer.
//
//   weights: [0, patch_base)           kernel o, chunk t at (o*T + t) * 128
//   patches: [patch_base, out_base)    position p, chunk t at (p*T + t) * 128
//   outputs: [out_base, memory_bytes)  group g, position p at (g*P + p) * out_bytes
//
// Chunks use the weight-row bit layout; patch chunks mirror it element for
// element with zeros in the padding halo.
struct MemoryLayout {
  std::uint64_t patch_base = 0;
  std::uint64_t out_base = 0;
  std::uint64_t out_bytes = 0;  // per (group, position)
  std::uint64_t memory_bytes = 0;
};

// Register conventions (v0 is never written and reads as zero):
//   v1..v16   staging, sector s slice j in v(1 + 4s + j)
//   chain     running partials of tiled kernels (quantized flows only)
//   output    results, ending at v31
struct RegisterMap {
  int staging_regs = 0;
  int chain_base = 0, chain_regs = 0;
  int out_base = 0, out_regs = 0;
  // Stores of position p are issued after position p+1's first patch loads.
  bool deferred_stores = false;
};

struct LoweredLayer {
  LayerDescriptor layer;
  MappingPlan plan;
  LowerOptions options;
  DimcConfig config;
  MemoryLayout memory;
  RegisterMap regs;
  LoopProgram program;
};

// Emits the five-step stream: per group, load up to G kernels (T rows each)
// with DL.M, then for every output position load the patch chunk by chunk
// with DL.I, chain T-1 DC.P per kernel into a terminal DC.P or DC.F, store
// the results, and slide to the next position.
LoweredLayer lower(const LayerDescriptor& layer, const MappingPlan& plan, const LowerOptions& options = {});

// Packs weights and activations into the layout above. Throws
// Errc::InvalidArgument when a tensor's shape or value range does not match.
MemoryImage build_memory_image(const LoweredLayer& lowered, const KernelSet& weights, const FeatureMap& input);

// Reads results back from memory after the stream ran. Partial flows yield
// sign-extended 24-bit partials, quantized flows the stored nibbles.
FeatureMap extract_outputs(const LoweredLayer& lowered, const MemoryImage& memory);

struct LayerRun {
  SimOutcome outcome;
  FeatureMap output;
};

// Executes the fully expanded stream on a fresh tile and register file.
LayerRun run_layer(const LoweredLayer& lowered, MemoryImage memory, const TimingModel& timing,
                   const ExecOptions& options = {});

}  // namespace dimcsim
