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

#include "dimcsim/isa.hpp"

#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

constexpr std::uint32_t kFunct3DlI = 0b000;
constexpr std::uint32_t kFunct3DlM = 0b001;
constexpr std::uint32_t kFunct3DcP = 0b010;
constexpr std::uint32_t kFunct3DcF = 0b011;

constexpr std::uint32_t bits(std::uint32_t word, int lo, int width) {
  return (word >> lo) & ((1u << width) - 1);
}

constexpr std::uint32_t mask_of(int lo, int width) { return ((1u << width) - 1) << lo; }

constexpr std::uint32_t kFixed = mask_of(0, 7) | mask_of(12, 3);
constexpr std::uint32_t kUsedDlI = kFixed | mask_of(15, 5) | mask_of(20, 2) | mask_of(22, 2) | mask_of(25, 4);
constexpr std::uint32_t kUsedDlM = kUsedDlI | mask_of(7, 5);
constexpr std::uint32_t kUsedDcP = kFixed | mask_of(7, 5) | mask_of(15, 5) | mask_of(20, 1) | mask_of(21, 1) |
                                   mask_of(22, 5);
constexpr std::uint32_t kUsedDcF = kUsedDcP | mask_of(27, 2);

void check(unsigned value, unsigned lo, unsigned hi, const char* name, std::string_view mn) {
  if (value < lo || value > hi)
    throw Error(Errc::InvalidEncoding, fmt::format("{}: field {}={} out of range [{}, {}]", mn, name, value, lo, hi));
}

std::uint32_t base(std::uint32_t funct3, unsigned vs1) {
  return kCustom0Opcode | (funct3 << 12) | (std::uint32_t{vs1} << 15);
}

std::uint32_t load_fields(unsigned nvec, unsigned sec, unsigned mask) {
  return (std::uint32_t{nvec} - 1) << 20 | std::uint32_t{sec} << 22 | std::uint32_t{mask} << 25;
}

std::uint32_t compute_fields(unsigned vd, unsigned sh, unsigned dh, unsigned m_row) {
  return std::uint32_t{vd} << 7 | std::uint32_t{sh} << 20 | std::uint32_t{dh} << 21 | std::uint32_t{m_row} << 22;
}

}  // namespace

std::string_view mnemonic(const CustomInstruction& instr) {
  return std::visit(overloaded{
                        [](const DlI&) { return std::string_view("dl.i"); },
                        [](const DlM&) { return std::string_view("dl.m"); },
                        [](const DcP&) { return std::string_view("dc.p"); },
                        [](const DcF&) { return std::string_view("dc.f"); },
                    },
                    instr);
}

void validate(const CustomInstruction& instr) {
  const auto mn = mnemonic(instr);
  std::visit(overloaded{
                 [&](const DlI& i) {
                   check(i.vs1, 0, 31, "vs1", mn);
                   check(i.nvec, 1, 4, "nvec", mn);
                   check(i.sec, 0, 3, "sec", mn);
                   check(i.mask, 0, 15, "mask", mn);
                 },
                 [&](const DlM& i) {
                   check(i.vs1, 0, 31, "vs1", mn);
                   check(i.nvec, 1, 4, "nvec", mn);
                   check(i.sec, 0, 3, "sec", mn);
                   check(i.mask, 0, 15, "mask", mn);
                   check(i.m_row, 0, 31, "m_row", mn);
                 },
                 [&](const DcP& i) {
                   check(i.vs1, 0, 31, "vs1", mn);
                   check(i.vd, 0, 31, "vd", mn);
                   check(i.sh, 0, 1, "sh", mn);
                   check(i.dh, 0, 1, "dh", mn);
                   check(i.m_row, 0, 31, "m_row", mn);
                 },
                 [&](const DcF& i) {
                   check(i.vs1, 0, 31, "vs1", mn);
                   check(i.vd, 0, 31, "vd", mn);
                   check(i.sh, 0, 1, "sh", mn);
                   check(i.dh, 0, 1, "dh", mn);
                   check(i.m_row, 0, 31, "m_row", mn);
                   check(i.bidx, 0, 3, "bidx", mn);
                 },
             },
             instr);
}

std::uint32_t encode(const CustomInstruction& instr) {
  validate(instr);
  return std::visit(overloaded{
                        [](const DlI& i) { return base(kFunct3DlI, i.vs1) | load_fields(i.nvec, i.sec, i.mask); },
                        [](const DlM& i) {
                          return base(kFunct3DlM, i.vs1) | load_fields(i.nvec, i.sec, i.mask) |
                                 std::uint32_t{i.m_row} << 7;
                        },
                        [](const DcP& i) { return base(kFunct3DcP, i.vs1) | compute_fields(i.vd, i.sh, i.dh, i.m_row); },
                        [](const DcF& i) {
                          return base(kFunct3DcF, i.vs1) | compute_fields(i.vd, i.sh, i.dh, i.m_row) |
                                 std::uint32_t{i.bidx} << 27;
                        },
                    },
                    instr);
}

CustomInstruction decode(std::uint32_t word) {
  if (bits(word, 0, 7) != kCustom0Opcode)
    throw Error(Errc::NotCustom0, fmt::format("word 0x{:08x}: opcode 0b{:07b} is not custom-0", word, bits(word, 0, 7)));

  const auto reserved = [word](std::uint32_t used, std::string_view mn) {
    if (word & ~used)
      throw Error(Errc::ReservedBitsSet,
                  fmt::format("word 0x{:08x}: {} has reserved bits set (0x{:08x})", word, mn, word & ~used));
  };
  const auto vs1 = static_cast<std::uint8_t>(bits(word, 15, 5));

  switch (bits(word, 12, 3)) {
    case kFunct3DlI:
      reserved(kUsedDlI, "dl.i");
      return DlI{vs1, static_cast<std::uint8_t>(bits(word, 20, 2) + 1), static_cast<std::uint8_t>(bits(word, 22, 2)),
                 static_cast<std::uint8_t>(bits(word, 25, 4))};
    case kFunct3DlM:
      reserved(kUsedDlM, "dl.m");
      return DlM{vs1, static_cast<std::uint8_t>(bits(word, 20, 2) + 1), static_cast<std::uint8_t>(bits(word, 22, 2)),
                 static_cast<std::uint8_t>(bits(word, 25, 4)), static_cast<std::uint8_t>(bits(word, 7, 5))};
    case kFunct3DcP:
      reserved(kUsedDcP, "dc.p");
      return DcP{vs1, static_cast<std::uint8_t>(bits(word, 7, 5)), static_cast<std::uint8_t>(bits(word, 20, 1)),
                 static_cast<std::uint8_t>(bits(word, 21, 1)), static_cast<std::uint8_t>(bits(word, 22, 5))};
    case kFunct3DcF:
      reserved(kUsedDcF, "dc.f");
      return DcF{vs1,
                 static_cast<std::uint8_t>(bits(word, 7, 5)),
                 static_cast<std::uint8_t>(bits(word, 20, 1)),
                 static_cast<std::uint8_t>(bits(word, 21, 1)),
                 static_cast<std::uint8_t>(bits(word, 22, 5)),
                 static_cast<std::uint8_t>(bits(word, 27, 2))};
    default:
      throw Error(Errc::UnknownFunct3,
                  fmt::format("word 0x{:08x}: funct3 0b{:03b} is not a DIMC instruction", word, bits(word, 12, 3)));
  }
}

void write_words(std::ostream& out, std::span<const std::uint32_t> words) {
  for (std::uint32_t w : words) {
    const char bytes[4] = {static_cast<char>(w & 0xff), static_cast<char>((w >> 8) & 0xff),
                           static_cast<char>((w >> 16) & 0xff), static_cast<char>((w >> 24) & 0xff)};
    out.write(bytes, 4);
  }
  if (!out) throw Error(Errc::Io, "failed to write instruction stream");
}

std::vector<std::uint32_t> read_words(std::istream& in) {
  std::vector<std::uint32_t> words;
  unsigned char bytes[4];
  while (in.read(reinterpret_cast<char*>(bytes), 4))
    words.push_back(std::uint32_t{bytes[0]} | std::uint32_t{bytes[1]} << 8 | std::uint32_t{bytes[2]} << 16 |
                    std::uint32_t{bytes[3]} << 24);
  if (in.gcount() != 0)
    throw Error(Errc::Parse, fmt::format("instruction stream has {} trailing byte(s)", in.gcount()));
  return words;
}

}  // namespace dimcsim
