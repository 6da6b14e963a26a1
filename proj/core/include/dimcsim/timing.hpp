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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "dimcsim/program.hpp"

namespace dimcsim {

struct KindTiming {
  std::uint32_t latency = 1;
  std::uint32_t issue_interval = 1;
  friend bool operator==(const KindTiming&, const KindTiming&) = default;
};

// Per-class latency/issue table plus the fixed external-memory latency and
// the clock used to convert cycles into time.
//
// Defaults: vector load/store take the memory latency (8), vector
// arithmetic 1, DL.I/DL.M 1, DC.P/DC.F 4; every issue interval is 1.
struct TimingModel {
  TimingModel();

  std::array<KindTiming, kInstrKinds> table;
  std::uint32_t memory_latency = 8;
  double freq_hz = 500e6;

  const KindTiming& operator[](InstrKind kind) const { return table[static_cast<int>(kind)]; }
  KindTiming& operator[](InstrKind kind) { return table[static_cast<int>(kind)]; }

  // Also retimes vector loads and stores.
  void set_memory_latency(std::uint32_t cycles);
  // Throws Errc::InvalidArgument on a zero latency/interval or non-positive clock.
  void validate() const;

  friend bool operator==(const TimingModel&, const TimingModel&) = default;
};

// Accepts {"memory_latency": 8, "freq_hz": 5e8,
//          "classes": {"dc.p": {"latency": 4, "issue_interval": 1}, ...}}.
// Any key may be omitted; class entries override the memory latency.
TimingModel timing_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TimingModel& timing);

struct CycleStats {
  std::uint64_t total_cycles = 0;
  std::array<std::uint64_t, kOpClasses> class_cycles{};
  std::array<std::uint64_t, kOpClasses> class_instructions{};
  std::array<std::uint64_t, kInstrKinds> kind_instructions{};

  std::uint64_t instructions() const;
  std::uint64_t cycles(OpClass c) const { return class_cycles[static_cast<int>(c)]; }
  std::uint64_t count(InstrKind k) const { return kind_instructions[static_cast<int>(k)]; }

  friend bool operator==(const CycleStats&, const CycleStats&) = default;
};

// In-order single-issue scoreboard.
//
// An instruction issues at the earliest cycle that is (a) after the previous
// issue, (b) no earlier than the ready time of every source (VRF register,
// input-buffer sector, weight row), (c) late enough that it completes after
// the pending write to its destination, and (d) when its functional unit is
// free. Vector loads additionally wait for all earlier stores to complete.
// The run ends when the last result is written.
//
// Each instruction is charged the cycles from the previous issue up to and
// including its own issue; the drain after the last issue is charged to the
// last instruction. Class cycles therefore always sum to total_cycles.
class TimingEngine {
 public:
  explicit TimingEngine(const TimingModel& timing);

  // Returns the issue cycle. Operands must already be range-checked.
  std::uint64_t issue(const Instruction& instr);

  CycleStats stats() const;
  // Counters without the final drain; differences between two points are
  // what fast_forward expects.
  const CycleStats& accumulated() const { return acc_; }

  // Scoreboard relative to the next free issue slot, for steady-state
  // detection. Two engines with equal snapshots time any suffix identically.
  std::vector<std::uint64_t> snapshot() const;
  // Replays `iterations` more copies of a steady-state body whose single
  // iteration advanced the clock by `period` and the counters by `per_iter`.
  void fast_forward(std::uint64_t period, std::uint64_t iterations, const CycleStats& per_iter);

 private:
  enum Unit { kMemoryPort, kVectorAlu, kDimcLoad, kDimcCompute, kUnits };

  const TimingModel& timing_;
  std::array<std::uint64_t, 32> reg_ready_{};
  std::array<std::uint64_t, 4> sector_ready_{};
  std::array<std::uint64_t, 32> row_ready_{};
  std::array<std::uint64_t, kUnits> unit_free_{};
  std::uint64_t store_done_ = 0;
  std::uint64_t max_done_ = 0;
  std::uint64_t next_issue_ = 0;
  bool any_ = false;
  OpClass last_class_ = OpClass::Computing;
  CycleStats acc_;
};

}  // namespace dimcsim
