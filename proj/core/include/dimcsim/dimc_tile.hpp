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

namespace dimcsim {

inline constexpr int kTileRows = 32;
inline constexpr int kRowBits = 1024;
inline constexpr int kSectors = 4;
inline constexpr int kSectorBits = 256;
inline constexpr int kSliceBits = 64;
inline constexpr int kSlicesPerSector = kSectorBits / kSliceBits;
inline constexpr int kWordsPerRow = kRowBits / kSliceBits;
inline constexpr int kPartialBits = 24;

// A 1024-bit vector stored as 16 little-endian 64-bit slices. Element k of
// width w occupies bits [k*w, k*w + w - 1].
using RowBits = std::array<std::uint64_t, kWordsPerRow>;
// One 256-bit transfer; slice i holds bits [64*i, 64*i + 63] of the sector.
using SectorData = std::array<std::uint64_t, kSlicesPerSector>;

struct PrecisionMode {
  int bits = 4;
  bool input_signed = true;
  bool weight_signed = true;

  // Throws Errc::InvalidArgument unless bits is 1, 2 or 4.
  void validate() const;
  int elements_per_row() const { return kRowBits / bits; }

  friend bool operator==(const PrecisionMode&, const PrecisionMode&) = default;
};

// Signed 24-bit accumulator value. Arithmetic wraps modulo 2^24.
class PartialSum {
 public:
  constexpr PartialSum() = default;

  static constexpr PartialSum wrap(std::int64_t raw) {
    auto low = static_cast<std::uint64_t>(raw) & ((std::uint64_t{1} << kPartialBits) - 1);
    auto v = static_cast<std::int64_t>(low);
    if (v >= (std::int64_t{1} << (kPartialBits - 1))) v -= std::int64_t{1} << kPartialBits;
    PartialSum p;
    p.value_ = static_cast<std::int32_t>(v);
    return p;
  }

  constexpr std::int32_t value() const { return value_; }

  friend constexpr bool operator==(PartialSum, PartialSum) = default;

 private:
  std::int32_t value_ = 0;
};

struct QuantConfig {
  int right_shift = 0;
  int out_bits = 4;

  // Throws Errc::InvalidArgument for a negative shift or out_bits not in {1,2,4}.
  void validate() const;

  friend bool operator==(const QuantConfig&, const QuantConfig&) = default;
};

// ReLU, arithmetic right shift, then unsigned saturation to out_bits.
std::uint8_t quantize(PartialSum partial, const QuantConfig& q);

// Decodes element `index` of width `bits` from a 1024-bit vector.
std::int32_t decode_element(const RowBits& bits_vec, int index, int bits, bool is_signed);

// Bit-exact functional model of the DIMC tile: 32 weight rows of 1024 bits
// plus the 1024-bit input buffer. No timing.
class DimcTileState {
 public:
  // Slice i of `sector` takes data[i] iff bit i of valid_mask is set.
  void load_input_sector(int sector, const SectorData& data, unsigned valid_mask);
  void load_memory_row(int row, int sector, const SectorData& data, unsigned valid_mask);

  PartialSum compute_row(int row, const PrecisionMode& mode, PartialSum incoming) const;
  // compute_row followed by quantize(); the result is a nibble in [0, 15].
  std::uint8_t compute_row_final(int row, const PrecisionMode& mode, PartialSum incoming,
                                 const QuantConfig& q) const;

  const RowBits& input_buffer() const { return input_; }
  const RowBits& row(int index) const;

  friend bool operator==(const DimcTileState&, const DimcTileState&) = default;

 private:
  std::array<RowBits, kTileRows> memory_{};
  RowBits input_{};
};

}  // namespace dimcsim
