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

#include <random>

#include <benchmark/benchmark.h>

#include "dimcsim/dimc_tile.hpp"
#include "dimcsim/isa.hpp"
#include "dimcsim/lowering.hpp"
#include "dimcsim/reference.hpp"

using namespace dimcsim;

namespace {

LayerDescriptor conv(int ich, int och, int hw, int k, int pad) {
  LayerDescriptor d;
  d.name = "bench";
  d.ich = ich;
  d.och = och;
  d.h = d.w = hw;
  d.kh = d.kw = k;
  d.padding = pad;
  return d;
}

void BM_ComputeRow(benchmark::State& state) {
  const PrecisionMode mode{static_cast<int>(state.range(0)), state.range(1) != 0, state.range(1) != 0};
  std::mt19937_64 rng(1);
  DimcTileState tile;
  for (int s = 0; s < kSectors; ++s) {
    tile.load_input_sector(s, {rng(), rng(), rng(), rng()}, 0xf);
    tile.load_memory_row(0, s, {rng(), rng(), rng(), rng()}, 0xf);
  }
  PartialSum acc;
  for (auto _ : state) {
    acc = tile.compute_row(0, mode, acc);
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * mode.elements_per_row());
}
BENCHMARK(BM_ComputeRow)->ArgsProduct({{1, 2, 4}, {0, 1}})->ArgNames({"bits", "signed"});

void BM_EncodeDecode(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::vector<CustomInstruction> instrs;
  for (int i = 0; i < 1024; ++i) {
    const auto f = [&](unsigned m) { return static_cast<std::uint8_t>(rng() % m); };
    instrs.push_back(i % 2 ? CustomInstruction(DcF{f(32), f(32), f(2), f(2), f(32), f(4)})
                           : CustomInstruction(DlM{f(28), std::uint8_t(1 + f(4)), f(4), f(16), f(32)}));
  }
  for (auto _ : state)
    for (const auto& i : instrs) benchmark::DoNotOptimize(decode(encode(i)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(instrs.size()));
}
BENCHMARK(BM_EncodeDecode);

// A 56x56, 64-channel 3x3 layer (T = 3) timed with and without loop compression.
void BM_EstimateTiming(benchmark::State& state) {
  const LayerDescriptor layer = conv(64, 64, 56, 3, 1);
  const LoweredLayer lowered = lower(layer, plan_mapping(layer));
  const TimingModel timing;
  const bool compress = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(estimate_timing(lowered.program, timing, compress));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lowered.program.instruction_count()));
}
BENCHMARK(BM_EstimateTiming)->Arg(0)->Arg(1)->ArgName("compress")->Unit(benchmark::kMillisecond);

void BM_RunLayer(benchmark::State& state) {
  const LayerDescriptor layer = conv(32, 32, 12, 3, 1);
  const LoweredLayer lowered = lower(layer, plan_mapping(layer));
  std::mt19937_64 rng(3);
  const MemoryImage image = build_memory_image(lowered, random_weights(layer, rng), random_input(layer, rng));
  for (auto _ : state) benchmark::DoNotOptimize(run_layer(lowered, image, {}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(lowered.program.instruction_count()));
}
BENCHMARK(BM_RunLayer)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
