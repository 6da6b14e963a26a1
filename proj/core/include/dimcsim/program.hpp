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
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dimcsim/isa.hpp"

namespace dimcsim {

// Unit-stride 64-bit vector load (vle64.v): vd <- mem[addr .. addr+7].
struct VectorLoad {
  std::uint8_t vd = 0;
  std::uint64_t addr = 0;
  friend bool operator==(const VectorLoad&, const VectorLoad&) = default;
};

// Unit-stride 64-bit vector store (vse64.v): mem[addr .. addr+7] <- vs.
struct VectorStore {
  std::uint8_t vs = 0;
  std::uint64_t addr = 0;
  friend bool operator==(const VectorStore&, const VectorStore&) = default;
};

// Register splat (vmv.v.x): vd <- value.
struct VectorSplat {
  std::uint8_t vd = 0;
  std::uint64_t value = 0;
  friend bool operator==(const VectorSplat&, const VectorSplat&) = default;
};

using Instruction = std::variant<DlI, DlM, DcP, DcF, VectorLoad, VectorStore, VectorSplat>;

// Latency-table class of an instruction.
enum class InstrKind { VectorLoad, VectorStore, VectorArith, DlI, DlM, DcP, DcF };
inline constexpr int kInstrKinds = 7;

// Operation-distribution bucket.
enum class OpClass { Computing, Loading, Storing };
inline constexpr int kOpClasses = 3;

InstrKind kind_of(const Instruction& instr);
OpClass class_of(InstrKind kind);
inline OpClass class_of(const Instruction& instr) { return class_of(kind_of(instr)); }

std::string_view to_string(InstrKind kind);
std::string_view to_string(OpClass cls);
std::string_view mnemonic(const Instruction& instr);
std::string format_instruction(const Instruction& instr);

Instruction to_instruction(const CustomInstruction& custom);

// Decodes a stream of custom-0 words; failures are rethrown as SimError
// carrying the index of the offending word.
std::vector<Instruction> decode_program(std::span<const std::uint32_t> words);

// A straight-line body repeated `count` times. On iteration i every memory
// access in the body is displaced by i * strides[k] bytes (strides is
// parallel to body; non-memory entries are ignored).
struct Block {
  std::vector<Instruction> body;
  std::vector<std::int64_t> strides;
  std::uint64_t count = 1;

  // Body entry k as issued on the given iteration.
  Instruction at(std::size_t k, std::uint64_t iteration) const;
};

// Loop-structured instruction stream, as emitted by the layer lowering.
struct LoopProgram {
  std::vector<Block> blocks;

  std::uint64_t instruction_count() const;
  std::vector<Instruction> expand() const;
};

}  // namespace dimcsim
