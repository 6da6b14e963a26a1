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

#include "dimcsim/program.hpp"

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

InstrKind kind_of(const Instruction& instr) {
  return std::visit(overloaded{
                        [](const DlI&) { return InstrKind::DlI; },
                        [](const DlM&) { return InstrKind::DlM; },
                        [](const DcP&) { return InstrKind::DcP; },
                        [](const DcF&) { return InstrKind::DcF; },
                        [](const VectorLoad&) { return InstrKind::VectorLoad; },
                        [](const VectorStore&) { return InstrKind::VectorStore; },
                        [](const VectorSplat&) { return InstrKind::VectorArith; },
                    },
                    instr);
}

OpClass class_of(InstrKind kind) {
  switch (kind) {
    case InstrKind::DcP:
    case InstrKind::DcF:
      return OpClass::Computing;
    case InstrKind::VectorStore:
      return OpClass::Storing;
    // Register preparation feeds the DIMC, so it is accounted with loads.
    case InstrKind::VectorArith:
    case InstrKind::VectorLoad:
    case InstrKind::DlI:
    case InstrKind::DlM:
      return OpClass::Loading;
  }
  return OpClass::Loading;
}

std::string_view to_string(InstrKind kind) {
  switch (kind) {
    case InstrKind::VectorLoad: return "vle";
    case InstrKind::VectorStore: return "vse";
    case InstrKind::VectorArith: return "valu";
    case InstrKind::DlI: return "dl.i";
    case InstrKind::DlM: return "dl.m";
    case InstrKind::DcP: return "dc.p";
    case InstrKind::DcF: return "dc.f";
  }
  return "?";
}

std::string_view to_string(OpClass cls) {
  switch (cls) {
    case OpClass::Computing: return "computing";
    case OpClass::Loading: return "loading";
    case OpClass::Storing: return "storing";
  }
  return "?";
}

std::string_view mnemonic(const Instruction& instr) {
  switch (kind_of(instr)) {
    case InstrKind::VectorLoad: return "vle64.v";
    case InstrKind::VectorStore: return "vse64.v";
    case InstrKind::VectorArith: return "vmv.v.x";
    default: return to_string(kind_of(instr));
  }
}

std::string format_instruction(const Instruction& instr) {
  return std::visit(overloaded{
                        [](const VectorLoad& i) { return fmt::format("vle64.v v{}, 0x{:x}", i.vd, i.addr); },
                        [](const VectorStore& i) { return fmt::format("vse64.v v{}, 0x{:x}", i.vs, i.addr); },
                        [](const VectorSplat& i) { return fmt::format("vmv.v.x v{}, 0x{:x}", i.vd, i.value); },
                        [](const auto& custom) { return format_instruction(CustomInstruction{custom}); },
                    },
                    instr);
}

Instruction to_instruction(const CustomInstruction& custom) {
  return std::visit([](const auto& i) -> Instruction { return i; }, custom);
}

std::vector<Instruction> decode_program(std::span<const std::uint32_t> words) {
  std::vector<Instruction> out;
  out.reserve(words.size());
  for (std::size_t pc = 0; pc < words.size(); ++pc) {
    try {
      out.push_back(to_instruction(decode(words[pc])));
    } catch (const Error& e) {
      throw SimError(e.code(), pc, e.what());
    }
  }
  return out;
}

std::uint64_t LoopProgram::instruction_count() const {
  std::uint64_t n = 0;
  for (const Block& b : blocks) n += b.body.size() * b.count;
  return n;
}

Instruction Block::at(std::size_t k, std::uint64_t iteration) const {
  Instruction instr = body[k];
  const std::int64_t stride = k < strides.size() ? strides[k] : 0;
  const auto displacement = static_cast<std::uint64_t>(stride * static_cast<std::int64_t>(iteration));
  if (auto* ld = std::get_if<VectorLoad>(&instr)) ld->addr += displacement;
  if (auto* st = std::get_if<VectorStore>(&instr)) st->addr += displacement;
  return instr;
}

std::vector<Instruction> LoopProgram::expand() const {
  std::vector<Instruction> out;
  out.reserve(instruction_count());
  for (const Block& b : blocks)
    for (std::uint64_t it = 0; it < b.count; ++it)
      for (std::size_t k = 0; k < b.body.size(); ++k) out.push_back(b.at(k, it));
  return out;
}

}  // namespace dimcsim
