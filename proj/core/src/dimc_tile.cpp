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

#include "dimcsim/dimc_tile.hpp"

#include <algorithm>
#include <bit>

#include <fmt/format.h>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

void check_index(int value, int limit, const char* what) {
  if (value < 0 || value >= limit)
    throw Error(Errc::InvalidArgument, fmt::format("{} {} out of range [0, {}]", what, value, limit - 1));
}

void masked_sector_write(RowBits& dst, int sector, const SectorData& data, unsigned valid_mask) {
  if (valid_mask >= (1u << kSlicesPerSector))
    throw Error(Errc::InvalidArgument, fmt::format("slice mask 0x{:x} wider than {} bits", valid_mask, kSlicesPerSector));
  for (int i = 0; i < kSlicesPerSector; ++i)
    if (valid_mask & (1u << i)) dst[sector * kSlicesPerSector + i] = data[i];
}

inline std::int64_t field(std::uint64_t word, int shift, int bits, bool is_signed) {
  if (is_signed) {
    // Move the field to the top, then arithmetic-shift it back down.
    auto top = static_cast<std::int64_t>(word << (64 - shift - bits));
    return top >> (64 - bits);
  }
  return static_cast<std::int64_t>((word >> shift) & ((std::uint64_t{1} << bits) - 1));
}

}  // namespace

void PrecisionMode::validate() const {
  if (bits != 1 && bits != 2 && bits != 4)
    throw Error(Errc::InvalidArgument, fmt::format("unsupported DIMC element width {} (expected 1, 2 or 4)", bits));
}

void QuantConfig::validate() const {
  if (right_shift < 0)
    throw Error(Errc::InvalidArgument, fmt::format("negative requantization shift {}", right_shift));
  if (out_bits != 1 && out_bits != 2 && out_bits != 4)
    throw Error(Errc::InvalidArgument, fmt::format("unsupported output width {}", out_bits));
}

std::uint8_t quantize(PartialSum partial, const QuantConfig& q) {
  std::int32_t v = std::max(partial.value(), 0);
  v = q.right_shift >= 31 ? 0 : v >> q.right_shift;
  const std::int32_t ceiling = (1 << q.out_bits) - 1;
  return static_cast<std::uint8_t>(std::min(v, ceiling));
}

std::int32_t decode_element(const RowBits& bits_vec, int index, int bits, bool is_signed) {
  const int bit = index * bits;
  return static_cast<std::int32_t>(field(bits_vec[bit / 64], bit % 64, bits, is_signed));
}

void DimcTileState::load_input_sector(int sector, const SectorData& data, unsigned valid_mask) {
  check_index(sector, kSectors, "sector");
  masked_sector_write(input_, sector, data, valid_mask);
}

void DimcTileState::load_memory_row(int row, int sector, const SectorData& data, unsigned valid_mask) {
  check_index(row, kTileRows, "row");
  check_index(sector, kSectors, "sector");
  masked_sector_write(memory_[row], sector, data, valid_mask);
}

const RowBits& DimcTileState::row(int index) const {
  check_index(index, kTileRows, "row");
  return memory_[index];
}

PartialSum DimcTileState::compute_row(int row, const PrecisionMode& mode, PartialSum incoming) const {
  check_index(row, kTileRows, "row");
  mode.validate();
  const RowBits& weights = memory_[row];
  const int w = mode.bits;

  std::int64_t acc = incoming.value();
  for (int word = 0; word < kWordsPerRow; ++word) {
    const std::uint64_t in = input_[word];
    const std::uint64_t wt = weights[word];
    if ((in | wt) == 0) continue;
    if (w == 1 && !mode.input_signed && !mode.weight_signed) {
      acc += std::popcount(in & wt);
      continue;
    }
    for (int shift = 0; shift < 64; shift += w)
      acc += field(in, shift, w, mode.input_signed) * field(wt, shift, w, mode.weight_signed);
  }
  return PartialSum::wrap(acc);
}

std::uint8_t DimcTileState::compute_row_final(int row, const PrecisionMode& mode, PartialSum incoming,
                                              const QuantConfig& q) const {
  q.validate();
  return quantize(compute_row(row, mode, incoming), q);
}

}  // namespace dimcsim
