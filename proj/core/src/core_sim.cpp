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

#include "dimcsim/core_sim.hpp"

#include <ostream>

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

void require(bool ok, std::size_t pc, const std::string& what) {
  if (!ok) throw SimError(Errc::InvalidArgument, pc, what);
}

void check_reg(unsigned reg, std::size_t pc, const char* field) {
  require(reg < kVectorRegs, pc, fmt::format("{}=v{} is not a vector register", field, reg));
}

void check_reg_group(unsigned vs1, unsigned nvec, std::size_t pc) {
  require(vs1 + nvec <= kVectorRegs, pc, fmt::format("register group v{}..v{} runs past v31", vs1, vs1 + nvec - 1));
}

SectorData gather(const VectorRegisterFile& vrf, unsigned vs1, unsigned nvec) {
  SectorData data{};
  for (unsigned i = 0; i < nvec; ++i) data[i] = vrf.read(static_cast<int>(vs1 + i));
  return data;
}

PartialSum incoming_partial(const VectorRegisterFile& vrf, int reg, int half) {
  return PartialSum::wrap(static_cast<std::int32_t>(vrf.read_half(reg, half) << 8) >> 8);
}

// Pairs back-to-back DC.F results into one byte, low nibble first. Any other
// instruction in between starts a fresh byte.
struct NibblePacker {
  bool have_last = false;
  bool last_was_low = false;
  int vd = 0, dh = 0, bidx = 0;

  void write(VectorRegisterFile& vrf, const DcF& i, std::uint8_t nibble) {
    const bool same = have_last && vd == i.vd && dh == i.dh && bidx == i.bidx;
    if (same && last_was_low) {
      const std::uint8_t low = vrf.read_byte(i.vd, i.dh, i.bidx) & 0x0f;
      vrf.write_byte(i.vd, i.dh, i.bidx, static_cast<std::uint8_t>(low | (nibble << 4)));
      last_was_low = false;
    } else {
      vrf.write_byte(i.vd, i.dh, i.bidx, nibble);
      last_was_low = true;
    }
    have_last = true;
    vd = i.vd;
    dh = i.dh;
    bidx = i.bidx;
  }
};

std::string_view trace_mnemonic(InstrKind kind) {
  switch (kind) {
    case InstrKind::VectorLoad: return "vle64.v";
    case InstrKind::VectorStore: return "vse64.v";
    case InstrKind::VectorArith: return "vmv.v.x";
    default: return to_string(kind);
  }
}

}  // namespace

std::uint32_t VectorRegisterFile::read_half(int reg, int half) const {
  return static_cast<std::uint32_t>(read(reg) >> (32 * half));
}

void VectorRegisterFile::write_half(int reg, int half, std::uint32_t value) {
  const int shift = 32 * half;
  const std::uint64_t keep = ~(std::uint64_t{0xffffffff} << shift);
  write(reg, (read(reg) & keep) | (std::uint64_t{value} << shift));
}

std::uint8_t VectorRegisterFile::read_byte(int reg, int half, int byte) const {
  return static_cast<std::uint8_t>(read(reg) >> (8 * (4 * half + byte)));
}

void VectorRegisterFile::write_byte(int reg, int half, int byte, std::uint8_t value) {
  const int shift = 8 * (4 * half + byte);
  const std::uint64_t keep = ~(std::uint64_t{0xff} << shift);
  write(reg, (read(reg) & keep) | (std::uint64_t{value} << shift));
}

std::uint64_t MemoryImage::read64(std::uint64_t addr) const {
  if (addr > bytes_.size() || bytes_.size() - addr < 8)
    throw Error(Errc::InvalidArgument, fmt::format("load from 0x{:x} outside memory of {} bytes", addr, bytes_.size()));
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | bytes_[addr + b];
  return v;
}

void MemoryImage::write64(std::uint64_t addr, std::uint64_t value) {
  if (addr > bytes_.size() || bytes_.size() - addr < 8)
    throw Error(Errc::InvalidArgument, fmt::format("store to 0x{:x} outside memory of {} bytes", addr, bytes_.size()));
  for (int b = 0; b < 8; ++b) bytes_[addr + b] = static_cast<std::uint8_t>(value >> (8 * b));
}

void check_operands(const Instruction& instr, std::size_t pc) {
  std::visit(overloaded{
                 [&](const VectorLoad& i) { check_reg(i.vd, pc, "vd"); },
                 [&](const VectorStore& i) { check_reg(i.vs, pc, "vs"); },
                 [&](const VectorSplat& i) { check_reg(i.vd, pc, "vd"); },
                 [&](const auto& custom) {
                   try {
                     validate(CustomInstruction{custom});
                   } catch (const Error& e) {
                     throw SimError(e.code(), pc, e.what());
                   }
                   if constexpr (requires { custom.nvec; }) check_reg_group(custom.vs1, custom.nvec, pc);
                 },
             },
             instr);
}

namespace {

class Machine {
 public:
  Machine(const TimingModel& timing, MemoryImage memory, const DimcConfig& config, const ExecOptions& options)
      : config_(config), options_(options), engine_(timing) {
    timing.validate();
    config.precision.validate();
    config.quant.validate();
    out_.memory = std::move(memory);
  }

  void step(const Instruction& instr, std::size_t pc) {
    check_operands(instr, pc);
    if (!std::holds_alternative<DcF>(instr)) packer_.have_last = false;
    VectorRegisterFile& vrf = out_.vrf;
    DimcTileState& tile = out_.tile;
    try {
      std::visit(overloaded{
                     [&](const VectorLoad& i) { vrf.write(i.vd, out_.memory.read64(i.addr)); },
                     [&](const VectorStore& i) { out_.memory.write64(i.addr, vrf.read(i.vs)); },
                     [&](const VectorSplat& i) { vrf.write(i.vd, i.value); },
                     [&](const DlI& i) {
                       const unsigned mask = i.mask & ((1u << i.nvec) - 1);
                       tile.load_input_sector(i.sec, gather(vrf, i.vs1, i.nvec), mask);
                     },
                     [&](const DlM& i) {
                       const unsigned mask = i.mask & ((1u << i.nvec) - 1);
                       tile.load_memory_row(i.m_row, i.sec, gather(vrf, i.vs1, i.nvec), mask);
                     },
                     [&](const DcP& i) {
                       const PartialSum p =
                           tile.compute_row(i.m_row, config_.precision, incoming_partial(vrf, i.vs1, i.sh));
                       vrf.write_half(i.vd, i.dh, static_cast<std::uint32_t>(p.value()));
                     },
                     [&](const DcF& i) {
                       const std::uint8_t q = tile.compute_row_final(i.m_row, config_.precision,
                                                                     incoming_partial(vrf, i.vs1, i.sh), config_.quant);
                       packer_.write(vrf, i, q);
                     },
                 },
                 instr);
    } catch (const SimError&) {
      throw;
    } catch (const Error& e) {
      throw SimError(e.code(), pc, e.what());
    }
    const std::uint64_t cycle = engine_.issue(instr);
    if (options_.trace) out_.trace.push_back({cycle, kind_of(instr)});
  }

  SimOutcome finish() {
    out_.stats = engine_.stats();
    return std::move(out_);
  }

 private:
  const DimcConfig& config_;
  const ExecOptions& options_;
  TimingEngine engine_;
  NibblePacker packer_;
  SimOutcome out_;
};

}  // namespace

SimOutcome execute(std::span<const Instruction> program, const TimingModel& timing, MemoryImage memory,
                   const DimcConfig& config, const ExecOptions& options) {
  Machine m(timing, std::move(memory), config, options);
  for (std::size_t pc = 0; pc < program.size(); ++pc) m.step(program[pc], pc);
  return m.finish();
}

SimOutcome execute(const LoopProgram& program, const TimingModel& timing, MemoryImage memory,
                   const DimcConfig& config, const ExecOptions& options) {
  Machine m(timing, std::move(memory), config, options);
  std::size_t pc = 0;
  for (const Block& block : program.blocks)
    for (std::uint64_t it = 0; it < block.count; ++it)
      for (std::size_t k = 0; k < block.body.size(); ++k) m.step(block.at(k, it), pc++);
  return m.finish();
}

CycleStats estimate_timing(const LoopProgram& program, const TimingModel& timing, bool compress) {
  timing.validate();
  TimingEngine engine(timing);
  std::size_t pc = 0;
  for (const Block& block : program.blocks) {
    for (std::size_t k = 0; k < block.body.size(); ++k) check_operands(block.body[k], pc + k);

    std::uint64_t done = 0;
    std::vector<std::uint64_t> before = engine.snapshot();
    while (done < block.count) {
      const CycleStats start = engine.accumulated();
      for (const Instruction& instr : block.body) engine.issue(instr);
      ++done;
      if (!compress || done >= block.count) continue;

      std::vector<std::uint64_t> after = engine.snapshot();
      if (after != before) {
        before = std::move(after);
        continue;
      }
      // The iteration mapped the relative scoreboard onto itself, so every
      // remaining iteration repeats it exactly.
      CycleStats per_iter;
      const CycleStats& now = engine.accumulated();
      for (int c = 0; c < kOpClasses; ++c) {
        per_iter.class_cycles[c] = now.class_cycles[c] - start.class_cycles[c];
        per_iter.class_instructions[c] = now.class_instructions[c] - start.class_instructions[c];
      }
      for (int k = 0; k < kInstrKinds; ++k)
        per_iter.kind_instructions[k] = now.kind_instructions[k] - start.kind_instructions[k];
      // Charged cycles are issue-to-issue distances, so their sum over one
      // iteration is the clock advance.
      std::uint64_t period = 0;
      for (auto c : per_iter.class_cycles) period += c;
      engine.fast_forward(period, block.count - done, per_iter);
      done = block.count;
    }
    pc += block.body.size() * block.count;
  }
  return engine.stats();
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "cycle,class,mnemonic\n";
  for (const TraceRecord& r : trace)
    out << r.cycle << ',' << to_string(class_of(r.kind)) << ',' << trace_mnemonic(r.kind) << '\n';
}

}  // namespace dimcsim
