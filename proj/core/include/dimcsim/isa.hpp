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
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace dimcsim {

// Custom-0 major opcode (inst[6:0] = 0b0001011).
inline constexpr std::uint32_t kCustom0Opcode = 0b0001011;

// Bit layout of the four DIMC instructions.
//
//   [6:0]   opcode = custom-0        [14:12] funct3 (000 dl.i, 001 dl.m, 010 dc.p, 011 dc.f)
//   [11:7]  vd (dc.*) / m_row (dl.m) [19:15] vs1
//   dl.*:   [21:20] nvec-1  [23:22] sec  [28:25] mask
//   dc.*:   [20] sh  [21] dh  [26:22] m_row  [28:27] bidx (dc.f only)
//
// Every bit not listed for a given instruction is reserved and must be zero.

// Load nvec consecutive registers starting at vs1 into input-buffer sector `sec`.
struct DlI {
  std::uint8_t vs1 = 0;
  std::uint8_t nvec = 1;
  std::uint8_t sec = 0;
  std::uint8_t mask = 0;
  friend bool operator==(const DlI&, const DlI&) = default;
};

// As DlI, but the destination is sector `sec` of weight row m_row.
struct DlM {
  std::uint8_t vs1 = 0;
  std::uint8_t nvec = 1;
  std::uint8_t sec = 0;
  std::uint8_t mask = 0;
  std::uint8_t m_row = 0;
  friend bool operator==(const DlM&, const DlM&) = default;
};

// MAC against row m_row; partial in from vs1[sh], 24-bit partial out to vd[dh].
struct DcP {
  std::uint8_t vs1 = 0;
  std::uint8_t vd = 0;
  std::uint8_t sh = 0;
  std::uint8_t dh = 0;
  std::uint8_t m_row = 0;
  friend bool operator==(const DcP&, const DcP&) = default;
};

// MAC plus ReLU/requantization; the nibble lands in byte bidx of vd[dh].
struct DcF {
  std::uint8_t vs1 = 0;
  std::uint8_t vd = 0;
  std::uint8_t sh = 0;
  std::uint8_t dh = 0;
  std::uint8_t m_row = 0;
  std::uint8_t bidx = 0;
  friend bool operator==(const DcF&, const DcF&) = default;
};

using CustomInstruction = std::variant<DlI, DlM, DcP, DcF>;

std::string_view mnemonic(const CustomInstruction& instr);

// Throws Errc::InvalidEncoding naming the first field out of range.
void validate(const CustomInstruction& instr);

std::uint32_t encode(const CustomInstruction& instr);

// Throws Errc::NotCustom0, Errc::UnknownFunct3 or Errc::ReservedBitsSet.
CustomInstruction decode(std::uint32_t word);

// One instruction per line: a mnemonic followed by name=value fields, e.g.
//   dl.m vs1=4 nvec=2 sec=0 mask=0b0011 m_row=7
// Blank lines and '#' comments are ignored. Throws AsmError on failure.
std::vector<std::uint32_t> assemble(std::string_view text);
std::vector<CustomInstruction> parse_assembly(std::string_view text);

std::string format_instruction(const CustomInstruction& instr);
// Throws the decode errors for any word that is not a valid custom instruction.
std::string disassemble(std::span<const std::uint32_t> words);

// Binary streams are little-endian sequences of 32-bit words.
void write_words(std::ostream& out, std::span<const std::uint32_t> words);
std::vector<std::uint32_t> read_words(std::istream& in);

}  // namespace dimcsim
