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

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "dimcsim/dimc_tile.hpp"
#include "dimcsim/error.hpp"
#include "oracle.hpp"

using namespace dimcsim;

namespace {

constexpr std::uint64_t kOnes = ~std::uint64_t{0};

SectorData sector_of(const oracle::Row& row, int sector) {
  return {row[4 * sector], row[4 * sector + 1], row[4 * sector + 2], row[4 * sector + 3]};
}

void load_row(DimcTileState& tile, int row, const oracle::Row& bits) {
  for (int s = 0; s < kSectors; ++s) tile.load_memory_row(row, s, sector_of(bits, s), 0b1111);
}

void load_input(DimcTileState& tile, const oracle::Row& bits) {
  for (int s = 0; s < kSectors; ++s) tile.load_input_sector(s, sector_of(bits, s), 0b1111);
}

std::vector<std::int64_t> random_vector(std::mt19937_64& rng, int bits, bool is_signed) {
  std::vector<std::int64_t> v(1024 / bits);
  for (auto& x : v) x = oracle::random_element(rng, bits, is_signed);
  return v;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::Io;
}

}  // namespace

TEST(DimcTile, FullMaskInputLoadTouchesOnlyItsSector) {
  DimcTileState tile;
  tile.load_input_sector(0, {kOnes, kOnes, kOnes, kOnes}, 0b1111);
  for (int w = 0; w < kWordsPerRow; ++w) EXPECT_EQ(tile.input_buffer()[w], w < 4 ? kOnes : 0u) << w;
}

TEST(DimcTile, EmptyMaskIsIdentity) {
  DimcTileState tile;
  tile.load_input_sector(3, {1, 2, 3, 4}, 0b0101);
  const DimcTileState before = tile;
  tile.load_input_sector(3, {9, 9, 9, 9}, 0b0000);
  tile.load_memory_row(0, 0, {9, 9, 9, 9}, 0b0000);
  EXPECT_EQ(tile, before);
}

TEST(DimcTile, PartialMaskWritesSelectedSlices) {
  DimcTileState tile;
  tile.load_input_sector(1, {11, 22, 33, 44}, 0b1111);
  tile.load_input_sector(1, {0xA, 0xB, 0xC, 0xD}, 0b0101);
  EXPECT_EQ(tile.input_buffer()[4], 0xAu);
  EXPECT_EQ(tile.input_buffer()[5], 22u);
  EXPECT_EQ(tile.input_buffer()[6], 0xCu);
  EXPECT_EQ(tile.input_buffer()[7], 44u);
}

TEST(DimcTile, MemoryRowLoadIsLocal) {
  DimcTileState tile;
  tile.load_memory_row(31, 0, {kOnes, kOnes, kOnes, kOnes}, 0b1111);
  for (int r = 0; r < 31; ++r)
    for (auto w : tile.row(r)) EXPECT_EQ(w, 0u);
  for (int w = 0; w < kWordsPerRow; ++w) EXPECT_EQ(tile.row(31)[w], w < 4 ? kOnes : 0u);
}

TEST(DimcTile, TwoSectorLoadsConcatenate) {
  DimcTileState tile;
  tile.load_memory_row(5, 0, {1, 2, 3, 4}, 0b1111);
  tile.load_memory_row(5, 1, {5, 6, 7, 8}, 0b1111);
  for (int w = 0; w < 8; ++w) EXPECT_EQ(tile.row(5)[w], static_cast<std::uint64_t>(w + 1));
}

TEST(DimcTile, LoadsAreIdempotent) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    DimcTileState a;
    const SectorData d{rng(), rng(), rng(), rng()};
    const unsigned mask = rng() % 16;
    const int s = static_cast<int>(rng() % 4), r = static_cast<int>(rng() % 32);
    a.load_memory_row(r, s, d, mask);
    a.load_input_sector(s, d, mask);
    DimcTileState b = a;
    b.load_memory_row(r, s, d, mask);
    b.load_input_sector(s, d, mask);
    EXPECT_EQ(a, b);
  }
}

TEST(DimcTile, ZeroInputReturnsIncoming) {
  DimcTileState tile;
  load_row(tile, 7, oracle::pack(std::vector<std::int64_t>(256, 5), 4));
  EXPECT_EQ(tile.compute_row(7, {4, true, true}, PartialSum::wrap(5)).value(), 5);
}

TEST(DimcTile, SingleElementProduct) {
  DimcTileState tile;
  std::vector<std::int64_t> one(256, 0);
  one[0] = 1;
  load_row(tile, 0, oracle::pack(one, 4));
  load_input(tile, oracle::pack(one, 4));
  EXPECT_EQ(tile.compute_row(0, {4, true, true}, {}).value(), 1);
}

TEST(DimcTile, AllMinusOnesSigned) {
  DimcTileState tile;
  const std::vector<std::int64_t> m(256, -1);
  load_row(tile, 1, oracle::pack(m, 4));
  load_input(tile, oracle::pack(m, 4));
  EXPECT_EQ(tile.compute_row(1, {4, true, true}, {}).value(), 256);
  EXPECT_EQ(tile.compute_row(1, {4, false, false}, {}).value(), 256 * 225);
  EXPECT_EQ(tile.compute_row(1, {4, false, true}, {}).value(), -256 * 15);
}

class ComputeVsOracle : public ::testing::TestWithParam<std::tuple<int, bool, bool>> {};

TEST_P(ComputeVsOracle, RandomRowsMatchBruteForce) {
  const auto [bits, in_signed, w_signed] = GetParam();
  const PrecisionMode mode{bits, in_signed, w_signed};
  std::mt19937_64 rng(bits * 4 + in_signed * 2 + w_signed);
  for (int trial = 0; trial < 100; ++trial) {
    DimcTileState tile;
    const auto x = random_vector(rng, bits, in_signed);
    const auto w = random_vector(rng, bits, w_signed);
    const int row = trial % 32;
    load_input(tile, oracle::pack(x, bits));
    load_row(tile, row, oracle::pack(w, bits));
    const std::int64_t incoming = oracle::wrap24(static_cast<std::int64_t>(rng() % (1 << 24)));
    const std::int64_t want = oracle::wrap24(oracle::dot(x, w) + incoming);
    const DimcTileState before = tile;
    EXPECT_EQ(tile.compute_row(row, mode, PartialSum::wrap(incoming)).value(), want);
    EXPECT_EQ(tile, before);
  }
}

INSTANTIATE_TEST_SUITE_P(AllModes, ComputeVsOracle,
                         ::testing::Combine(::testing::Values(1, 2, 4), ::testing::Bool(), ::testing::Bool()));

TEST(DimcTile, ResultIndependentOfElementOrder) {
  std::mt19937_64 rng(19);
  for (int bits : {1, 2, 4}) {
    const PrecisionMode mode{bits, true, true};
    auto x = random_vector(rng, bits, true);
    auto w = random_vector(rng, bits, true);
    DimcTileState tile;
    load_input(tile, oracle::pack(x, bits));
    load_row(tile, 0, oracle::pack(w, bits));
    const std::int32_t want = tile.compute_row(0, mode, {}).value();
    std::vector<std::size_t> perm(x.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int trial = 0; trial < 20; ++trial) {
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::int64_t> px(x.size()), pw(w.size());
      for (std::size_t k = 0; k < perm.size(); ++k) {
        px[k] = x[perm[k]];
        pw[k] = w[perm[k]];
      }
      load_input(tile, oracle::pack(px, bits));
      load_row(tile, 0, oracle::pack(pw, bits));
      EXPECT_EQ(tile.compute_row(0, mode, {}).value(), want) << bits << "-bit trial " << trial;
    }
  }
}

TEST(DimcTile, IncomingShiftsResultModulo24Bits) {
  std::mt19937_64 rng(11);
  DimcTileState tile;
  load_input(tile, oracle::pack(random_vector(rng, 2, true), 2));
  load_row(tile, 2, oracle::pack(random_vector(rng, 2, false), 2));
  const PrecisionMode mode{2, true, false};
  const std::int64_t base = tile.compute_row(2, mode, {}).value();
  for (int i = 0; i < 500; ++i) {
    const std::int64_t a = static_cast<std::int64_t>(rng() % (1ull << 30)) - (1ll << 29);
    const std::int64_t got = tile.compute_row(2, mode, PartialSum::wrap(a)).value();
    EXPECT_EQ(oracle::wrap24(got - base - a), 0);
  }
}

TEST(PartialSum, WrapsTwosComplement) {
  EXPECT_EQ(PartialSum::wrap(8388607).value(), 8388607);
  EXPECT_EQ(PartialSum::wrap(8388608).value(), -8388608);
  EXPECT_EQ(PartialSum::wrap(-8388609).value(), 8388607);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto v = static_cast<std::int64_t>(rng());
    EXPECT_EQ(PartialSum::wrap(v).value(), oracle::wrap24(v));
  }
}

TEST(Quantize, Examples) {
  EXPECT_EQ(quantize(PartialSum::wrap(-100), {3, 4}), 0);
  EXPECT_EQ(quantize(PartialSum::wrap(57), {3, 4}), 7);
  EXPECT_EQ(quantize(PartialSum::wrap(4000), {4, 4}), 15);
  EXPECT_EQ(quantize(PartialSum::wrap(4000), {4, 2}), 3);
}

TEST(Quantize, MatchesOracleAndStaysInRange) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 5000; ++i) {
    const std::int64_t p = oracle::wrap24(static_cast<std::int64_t>(rng()));
    const int shift = static_cast<int>(rng() % 30);
    const int out_bits = std::array{1, 2, 4}[rng() % 3];
    const std::uint8_t q = quantize(PartialSum::wrap(p), {shift, out_bits});
    EXPECT_EQ(q, oracle::requantize(p, shift, out_bits));
    EXPECT_LE(q, (1 << out_bits) - 1);
  }
}

TEST(DimcTile, FinalComputeQuantizes) {
  DimcTileState tile;
  std::vector<std::int64_t> ones(256, 1);
  load_input(tile, oracle::pack(ones, 4));
  load_row(tile, 0, oracle::pack(ones, 4));
  EXPECT_EQ(tile.compute_row_final(0, {4, true, true}, {}, {5, 4}), 8);  // 256 >> 5
  EXPECT_EQ(tile.compute_row_final(0, {4, true, true}, PartialSum::wrap(-1000), {0, 4}), 0);
}

TEST(DimcTile, DecodeElementSignExtends) {
  const oracle::Row row = oracle::pack({-1, 7, -8, 3}, 4);
  EXPECT_EQ(decode_element(row, 0, 4, true), -1);
  EXPECT_EQ(decode_element(row, 0, 4, false), 15);
  EXPECT_EQ(decode_element(row, 2, 4, true), -8);
  EXPECT_EQ(decode_element(oracle::pack({1, 0, 1}, 1), 2, 1, true), -1);
}

TEST(DimcTile, RejectsOutOfRangeOperands) {
  DimcTileState tile;
  EXPECT_EQ(code_of([&] { tile.load_memory_row(32, 0, {}, 1); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { tile.load_input_sector(4, {}, 1); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { tile.load_input_sector(0, {}, 16); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { tile.compute_row(-1, {}, {}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { tile.compute_row(0, {3, true, true}, {}); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { QuantConfig{-1, 4}.validate(); }), Errc::InvalidArgument);
  EXPECT_EQ(code_of([&] { QuantConfig{0, 8}.validate(); }), Errc::InvalidArgument);
}
