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
#include <sstream>

#include <gtest/gtest.h>

#include "dimcsim/core_sim.hpp"
#include "dimcsim/error.hpp"
#include "oracle.hpp"

using namespace dimcsim;

namespace {

// Memory holding one 1024-bit row of weights at 0 and one of inputs at 128.
MemoryImage row_pair(const oracle::Row& w, const oracle::Row& x) {
  MemoryImage m(512);
  for (int i = 0; i < 16; ++i) {
    m.write64(8 * i, w[i]);
    m.write64(128 + 8 * i, x[i]);
  }
  return m;
}

// Loads the weight row into tile row `row` and the input row into the buffer.
std::vector<Instruction> load_both(int row) {
  std::vector<Instruction> p;
  for (int s = 0; s < 4; ++s) {
    for (int j = 0; j < 4; ++j) p.push_back(VectorLoad{std::uint8_t(1 + 4 * s + j), std::uint64_t(32 * s + 8 * j)});
    p.push_back(DlM{std::uint8_t(1 + 4 * s), 4, std::uint8_t(s), 0b1111, std::uint8_t(row)});
  }
  for (int s = 0; s < 4; ++s) {
    for (int j = 0; j < 4; ++j)
      p.push_back(VectorLoad{std::uint8_t(1 + 4 * s + j), std::uint64_t(128 + 32 * s + 8 * j)});
    p.push_back(DlI{std::uint8_t(1 + 4 * s), 4, std::uint8_t(s), 0b1111});
  }
  return p;
}

SimError sim_error(const std::vector<Instruction>& p, MemoryImage m = MemoryImage(64)) {
  try {
    execute(p, {}, std::move(m));
  } catch (const SimError& e) {
    return e;
  }
  ADD_FAILURE() << "no error";
  return SimError(Errc::Io, 0, "");
}

}  // namespace

TEST(CoreSim, RegisterFileHalvesAndBytes) {
  VectorRegisterFile vrf;
  vrf.write_half(3, 1, 0xdeadbeef);
  EXPECT_EQ(vrf.read(3), 0xdeadbeef00000000ull);
  vrf.write_byte(3, 0, 2, 0x5a);
  EXPECT_EQ(vrf.read(3), 0xdeadbeef005a0000ull);
  EXPECT_EQ(vrf.read_byte(3, 1, 3), 0xde);
  EXPECT_THROW(vrf.read(32), std::out_of_range);
}

TEST(CoreSim, MemoryIsLittleEndianAndBounded) {
  MemoryImage m(16);
  m.write64(8, 0x0102030405060708ull);
  EXPECT_EQ(m.byte(8), 0x08);
  EXPECT_EQ(m.byte(15), 0x01);
  EXPECT_EQ(m.read64(8), 0x0102030405060708ull);
  EXPECT_THROW(m.read64(9), Error);
  EXPECT_THROW(m.write64(~std::uint64_t{0} - 2, 0), Error);
}

TEST(CoreSim, DotProductThroughTheVectorPath) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int64_t> w(256), x(256);
    for (auto& v : w) v = oracle::random_element(rng, 4, true);
    for (auto& v : x) v = oracle::random_element(rng, 4, false);
    auto p = load_both(9);
    p.push_back(DcP{0, 20, 0, 1, 9});
    const SimOutcome out = execute(p, {}, row_pair(oracle::pack(w, 4), oracle::pack(x, 4)), {{4, false, true}, {}});
    const auto got = static_cast<std::int32_t>(out.vrf.read_half(20, 1));
    EXPECT_EQ(got, oracle::dot(w, x));
    EXPECT_EQ(out.vrf.read_half(20, 0), 0u);
  }
}

TEST(CoreSim, PartialIsSignExtendedInAndOut) {
  std::vector<std::int64_t> w(256, 0), x(256, 0);
  w[0] = -1;
  x[0] = 1;
  auto p = load_both(0);
  p.push_back(VectorSplat{20, 0x00FFFFFE00000000ull});  // high half holds -2 in 24 bits, no sign fill
  p.push_back(DcP{20, 21, 1, 0, 0});
  const SimOutcome out = execute(p, {}, row_pair(oracle::pack(w, 4), oracle::pack(x, 4)));
  EXPECT_EQ(out.vrf.read_half(21, 0), 0xFFFFFFFDu);  // -3 padded to 32 bits
}

TEST(CoreSim, FinalNibblesPairLowThenHigh) {
  std::vector<std::int64_t> ones(256, 1);
  auto p = load_both(0);
  DimcConfig cfg;
  cfg.quant = {5, 4};  // 256 >> 5 = 8
  p.push_back(DcF{0, 30, 0, 1, 0, 2});
  p.push_back(DcF{0, 30, 0, 1, 0, 2});
  p.push_back(DcF{0, 30, 0, 1, 0, 3});
  p.push_back(VectorSplat{29, 0});
  p.push_back(DcF{0, 30, 0, 1, 0, 3});
  const SimOutcome out = execute(p, {}, row_pair(oracle::pack(ones, 4), oracle::pack(ones, 4)), cfg);
  EXPECT_EQ(out.vrf.read_byte(30, 1, 2), 0x88);
  // A different byte starts fresh; an intervening instruction starts the
  // byte over, leaving the high nibble cleared.
  EXPECT_EQ(out.vrf.read_byte(30, 1, 3), 0x08);
  EXPECT_EQ(out.vrf.read_half(30, 0), 0u);
}

TEST(CoreSim, OddFinalCountLeavesHighNibbleZero) {
  std::vector<std::int64_t> ones(256, 1);
  auto p = load_both(0);
  p.push_back(VectorSplat{30, ~std::uint64_t{0}});
  for (int k = 0; k < 3; ++k) p.push_back(DcF{0, 30, 0, 0, 0, std::uint8_t(k / 2)});
  const SimOutcome out = execute(p, {}, row_pair(oracle::pack(ones, 4), oracle::pack(ones, 4)), {{4, true, true}, {6, 4}});
  EXPECT_EQ(out.vrf.read_byte(30, 0, 0), 0x44);
  EXPECT_EQ(out.vrf.read_byte(30, 0, 1), 0x04);
  EXPECT_EQ(out.vrf.read_byte(30, 0, 2), 0xFF);  // untouched
}

TEST(CoreSim, MaskBitsAboveNvecAreIgnored) {
  MemoryImage m(64);
  auto p = std::vector<Instruction>{VectorSplat{1, 7}, VectorSplat{2, 9}, DlI{1, 1, 0, 0b0011}};
  const SimOutcome out = execute(p, {}, m);
  EXPECT_EQ(out.tile.input_buffer()[0], 7u);
  EXPECT_EQ(out.tile.input_buffer()[1], 0u);
}

TEST(CoreSim, ErrorsCarryProgramCounter) {
  const SimError group = sim_error({VectorSplat{1, 0}, DlI{30, 3, 0, 1}});
  EXPECT_EQ(group.pc(), 1u);
  EXPECT_EQ(group.code(), Errc::InvalidArgument);
  const SimError oob = sim_error({VectorSplat{1, 0}, VectorSplat{2, 0}, VectorLoad{1, 60}});
  EXPECT_EQ(oob.pc(), 2u);
  const SimError field = sim_error({DcF{0, 0, 0, 0, 0, 9}});
  EXPECT_EQ(field.code(), Errc::InvalidEncoding);
  EXPECT_NE(std::string(field.what()).find("pc 0"), std::string::npos);
}

TEST(CoreSim, LatenciesNeverChangeResultsAndValuesNeverChangeTiming) {
  std::mt19937_64 rng(43);
  std::vector<std::int64_t> w(256), x(256);
  for (auto& v : w) v = oracle::random_element(rng, 4, true);
  for (auto& v : x) v = oracle::random_element(rng, 4, true);
  auto p = load_both(3);
  p.push_back(DcP{0, 20, 0, 0, 3});
  p.push_back(DcF{20, 21, 0, 0, 3, 0});
  p.push_back(VectorStore{21, 256});
  const MemoryImage mem = row_pair(oracle::pack(w, 4), oracle::pack(x, 4));
  TimingModel slow;
  slow.set_memory_latency(31);
  slow[InstrKind::DcP].latency = 7;
  const SimOutcome a = execute(p, {}, mem);
  const SimOutcome b = execute(p, slow, mem);
  EXPECT_EQ(a.memory, b.memory);
  EXPECT_EQ(a.vrf, b.vrf);
  EXPECT_NE(a.stats.total_cycles, b.stats.total_cycles);
  const SimOutcome zero = execute(p, {}, MemoryImage(512));
  EXPECT_EQ(zero.stats, a.stats);
  EXPECT_EQ(execute(p, {}, mem), a);
}

TEST(CoreSim, TraceCsv) {
  ExecOptions opts;
  opts.trace = true;
  const SimOutcome out =
      execute(std::vector<Instruction>{VectorSplat{1, 1}, DlI{1, 1, 0, 1}, DcP{0, 2, 0, 0, 0}, VectorStore{2, 0}}, {},
              MemoryImage(8), {}, opts);
  std::ostringstream os;
  write_trace_csv(os, out.trace);
  EXPECT_EQ(os.str(), "cycle,class,mnemonic\n0,loading,vmv.v.x\n1,loading,dl.i\n2,computing,dc.p\n6,storing,vse64.v\n");
}

TEST(CoreSim, CompressedTimingEqualsFullTrace) {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 150; ++trial) {
    LoopProgram prog;
    const int blocks = 1 + static_cast<int>(rng() % 3);
    for (int b = 0; b < blocks; ++b) {
      Block block;
      const int n = 1 + static_cast<int>(rng() % 12);
      for (int i = 0; i < n; ++i) {
        const auto r = [&](unsigned m) { return static_cast<std::uint8_t>(rng() % m); };
        switch (rng() % 6) {
          case 0: block.body.push_back(VectorLoad{r(32), 8ull * r(8)}); break;
          case 1: block.body.push_back(VectorStore{r(32), 8ull * r(8)}); break;
          case 2: block.body.push_back(DlI{r(28), std::uint8_t(1 + r(4)), r(4), r(16)}); break;
          case 3: block.body.push_back(DlM{r(28), std::uint8_t(1 + r(4)), r(4), r(16), r(32)}); break;
          case 4: block.body.push_back(DcP{r(32), r(32), r(2), r(2), r(32)}); break;
          default: block.body.push_back(DcF{r(32), r(32), r(2), r(2), r(32), r(4)}); break;
        }
        block.strides.push_back(8);
      }
      block.count = 1 + rng() % 40;
      prog.blocks.push_back(std::move(block));
    }
    TimingModel t;
    t.set_memory_latency(1 + static_cast<std::uint32_t>(rng() % 12));
    t[InstrKind::DcP].latency = 1 + static_cast<std::uint32_t>(rng() % 6);
    const CycleStats full = estimate_timing(prog, t, false);
    EXPECT_EQ(estimate_timing(prog, t, true), full) << trial;
    const auto flat = prog.expand();
    TimingEngine e(t);
    for (const auto& i : flat) e.issue(i);
    EXPECT_EQ(e.stats(), full);
  }
}
