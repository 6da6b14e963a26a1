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

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "dimcsim/dimc_tile.hpp"
#include "dimcsim/program.hpp"
#include "dimcsim/timing.hpp"

namespace dimcsim {

inline constexpr int kVectorRegs = 32;
inline constexpr int kVlenBits = 64;
inline constexpr int kElenBits = 32;

// 32 x 64-bit registers (VLEN = 64). Half h of a register is bits
// [32h + 31 : 32h]; byte b of half h is byte 4h + b of the little-endian word.
class VectorRegisterFile {
 public:
  std::uint64_t read(int reg) const { return regs_.at(reg); }
  void write(int reg, std::uint64_t value) { regs_.at(reg) = value; }

  std::uint32_t read_half(int reg, int half) const;
  void write_half(int reg, int half, std::uint32_t value);
  std::uint8_t read_byte(int reg, int half, int byte) const;
  void write_byte(int reg, int half, int byte, std::uint8_t value);

  friend bool operator==(const VectorRegisterFile&, const VectorRegisterFile&) = default;

 private:
  std::array<std::uint64_t, kVectorRegs> regs_{};
};

// Flat little-endian byte-addressed memory behind the fixed-latency port.
class MemoryImage {
 public:
  MemoryImage() = default;
  explicit MemoryImage(std::size_t bytes) : bytes_(bytes, 0) {}

  std::size_t size() const { return bytes_.size(); }
  // Both throw Errc::InvalidArgument when [addr, addr + 8) is out of bounds.
  std::uint64_t read64(std::uint64_t addr) const;
  void write64(std::uint64_t addr, std::uint64_t value);

  std::uint8_t byte(std::uint64_t addr) const { return bytes_.at(addr); }
  std::span<std::uint8_t> bytes() { return bytes_; }
  std::span<const std::uint8_t> bytes() const { return bytes_; }

  friend bool operator==(const MemoryImage&, const MemoryImage&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

// Out-of-band DIMC configuration (precision and requantization) for a run.
struct DimcConfig {
  PrecisionMode precision;
  QuantConfig quant;
  friend bool operator==(const DimcConfig&, const DimcConfig&) = default;
};

struct TraceRecord {
  std::uint64_t cycle = 0;
  InstrKind kind = InstrKind::VectorLoad;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

struct ExecOptions {
  bool trace = false;
};

struct SimOutcome {
  CycleStats stats;
  VectorRegisterFile vrf;
  DimcTileState tile;
  MemoryImage memory;
  std::vector<TraceRecord> trace;

  friend bool operator==(const SimOutcome&, const SimOutcome&) = default;
};

// Throws SimError (with the program counter) for register, row, sector or
// field values out of range.
void check_operands(const Instruction& instr, std::size_t pc);

// Runs the program functionally and through the timing scoreboard.
//
// DC.P reads the sign-extended low 24 bits of vs1[sh] and writes the
// sign-extended 24-bit result to vd[dh]. DC.F writes its nibble into byte
// bidx of vd[dh]: when the immediately preceding instruction is a DC.F that
// filled the low nibble of the same byte, it fills the high nibble; otherwise
// it writes the low nibble and clears the high one.
SimOutcome execute(std::span<const Instruction> program, const TimingModel& timing, MemoryImage memory,
                   const DimcConfig& config = {}, const ExecOptions& options = {});
// Same, streaming the loop structure without materializing the expansion.
SimOutcome execute(const LoopProgram& program, const TimingModel& timing, MemoryImage memory,
                   const DimcConfig& config = {}, const ExecOptions& options = {});

// Timing-only run of a loop-structured stream. With `compress`, each block is
// simulated until its scoreboard reaches a steady state and the remaining
// iterations are costed analytically; the result is cycle-identical to
// tracing every instruction.
CycleStats estimate_timing(const LoopProgram& program, const TimingModel& timing, bool compress = true);

// CSV with header "cycle,class,mnemonic"; one row per retired instruction.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace dimcsim
