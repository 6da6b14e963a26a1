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

#include "dimcsim/timing.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

constexpr std::array<InstrKind, kInstrKinds> kAllKinds{InstrKind::VectorLoad, InstrKind::VectorStore,
                                                       InstrKind::VectorArith, InstrKind::DlI,
                                                       InstrKind::DlM,        InstrKind::DcP,
                                                       InstrKind::DcF};

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

TimingModel::TimingModel() {
  (*this)[InstrKind::VectorArith] = {1, 1};
  (*this)[InstrKind::DlI] = {1, 1};
  (*this)[InstrKind::DlM] = {1, 1};
  (*this)[InstrKind::DcP] = {4, 1};
  (*this)[InstrKind::DcF] = {4, 1};
  set_memory_latency(8);
}

void TimingModel::set_memory_latency(std::uint32_t cycles) {
  memory_latency = cycles;
  (*this)[InstrKind::VectorLoad].latency = cycles;
  (*this)[InstrKind::VectorStore].latency = cycles;
}

void TimingModel::validate() const {
  if (!(freq_hz > 0)) throw Error(Errc::InvalidArgument, fmt::format("clock frequency must be positive, got {}", freq_hz));
  if (memory_latency < 1) throw Error(Errc::InvalidArgument, "memory latency must be at least 1 cycle");
  for (InstrKind k : kAllKinds) {
    if ((*this)[k].latency < 1)
      throw Error(Errc::InvalidArgument, fmt::format("latency of {} must be at least 1 cycle", to_string(k)));
    if ((*this)[k].issue_interval < 1)
      throw Error(Errc::InvalidArgument, fmt::format("issue interval of {} must be at least 1 cycle", to_string(k)));
  }
}

TimingModel timing_from_json(const nlohmann::json& j) {
  TimingModel t;
  try {
    if (j.contains("memory_latency")) t.set_memory_latency(j.at("memory_latency").get<std::uint32_t>());
    if (j.contains("freq_hz")) t.freq_hz = j.at("freq_hz").get<double>();
    if (j.contains("classes")) {
      for (const auto& [name, entry] : j.at("classes").items()) {
        auto it = std::find_if(kAllKinds.begin(), kAllKinds.end(), [&](InstrKind k) { return to_string(k) == name; });
        if (it == kAllKinds.end()) throw Error(Errc::Parse, fmt::format("unknown instruction class '{}'", name));
        if (entry.contains("latency")) t[*it].latency = entry.at("latency").get<std::uint32_t>();
        if (entry.contains("issue_interval")) t[*it].issue_interval = entry.at("issue_interval").get<std::uint32_t>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, fmt::format("timing config: {}", e.what()));
  }
  t.validate();
  return t;
}

nlohmann::json to_json(const TimingModel& timing) {
  nlohmann::json classes = nlohmann::json::object();
  for (InstrKind k : kAllKinds)
    classes[std::string(to_string(k))] = {{"latency", timing[k].latency},
                                          {"issue_interval", timing[k].issue_interval}};
  return {{"memory_latency", timing.memory_latency}, {"freq_hz", timing.freq_hz}, {"classes", classes}};
}

std::uint64_t CycleStats::instructions() const {
  std::uint64_t n = 0;
  for (auto c : class_instructions) n += c;
  return n;
}

TimingEngine::TimingEngine(const TimingModel& timing) : timing_(timing) {}

std::uint64_t TimingEngine::issue(const Instruction& instr) {
  const InstrKind kind = kind_of(instr);
  const KindTiming& kt = timing_[kind];
  std::uint64_t t = next_issue_;

  const auto need = [&t](std::uint64_t ready) { t = std::max(t, ready); };
  // Destination write must land after the previous pending write.
  const auto need_dest = [&t, &kt](std::uint64_t ready) {
    if (ready >= kt.latency) t = std::max(t, ready - kt.latency + 1);
  };

  Unit unit = kMemoryPort;
  std::visit(overloaded{
                 [&](const VectorLoad& i) {
                   need_dest(reg_ready_[i.vd]);
                   need(store_done_);
                   unit = kMemoryPort;
                 },
                 [&](const VectorStore& i) {
                   need(reg_ready_[i.vs]);
                   unit = kMemoryPort;
                 },
                 [&](const VectorSplat& i) {
                   need_dest(reg_ready_[i.vd]);
                   unit = kVectorAlu;
                 },
                 [&](const DlI& i) {
                   for (int r = 0; r < i.nvec; ++r) need(reg_ready_[i.vs1 + r]);
                   need_dest(sector_ready_[i.sec]);
                   unit = kDimcLoad;
                 },
                 [&](const DlM& i) {
                   for (int r = 0; r < i.nvec; ++r) need(reg_ready_[i.vs1 + r]);
                   need_dest(row_ready_[i.m_row]);
                   unit = kDimcLoad;
                 },
                 [&](const DcP& i) {
                   need(reg_ready_[i.vs1]);
                   for (auto s : sector_ready_) need(s);
                   need(row_ready_[i.m_row]);
                   need_dest(reg_ready_[i.vd]);
                   unit = kDimcCompute;
                 },
                 [&](const DcF& i) {
                   need(reg_ready_[i.vs1]);
                   for (auto s : sector_ready_) need(s);
                   need(row_ready_[i.m_row]);
                   need_dest(reg_ready_[i.vd]);
                   unit = kDimcCompute;
                 },
             },
             instr);
  need(unit_free_[unit]);

  const std::uint64_t done = t + kt.latency;
  std::visit(overloaded{
                 [&](const VectorLoad& i) { reg_ready_[i.vd] = done; },
                 [&](const VectorStore&) { store_done_ = std::max(store_done_, done); },
                 [&](const VectorSplat& i) { reg_ready_[i.vd] = done; },
                 [&](const DlI& i) { sector_ready_[i.sec] = done; },
                 [&](const DlM& i) { row_ready_[i.m_row] = done; },
                 [&](const DcP& i) { reg_ready_[i.vd] = done; },
                 [&](const DcF& i) { reg_ready_[i.vd] = done; },
             },
             instr);
  unit_free_[unit] = t + kt.issue_interval;
  max_done_ = std::max(max_done_, done);

  const OpClass cls = class_of(kind);
  acc_.class_cycles[static_cast<int>(cls)] += t - next_issue_ + 1;
  acc_.class_instructions[static_cast<int>(cls)] += 1;
  acc_.kind_instructions[static_cast<int>(kind)] += 1;
  last_class_ = cls;
  any_ = true;
  next_issue_ = t + 1;
  return t;
}

CycleStats TimingEngine::stats() const {
  CycleStats s = acc_;
  s.total_cycles = max_done_;
  if (any_) s.class_cycles[static_cast<int>(last_class_)] += max_done_ - next_issue_;
  return s;
}

std::vector<std::uint64_t> TimingEngine::snapshot() const {
  std::vector<std::uint64_t> out;
  out.reserve(reg_ready_.size() + sector_ready_.size() + row_ready_.size() + unit_free_.size() + 3);
  const auto rel = [this](std::uint64_t x) { return x > next_issue_ ? x - next_issue_ : 0; };
  for (auto x : reg_ready_) out.push_back(rel(x));
  for (auto x : sector_ready_) out.push_back(rel(x));
  for (auto x : row_ready_) out.push_back(rel(x));
  for (auto x : unit_free_) out.push_back(rel(x));
  out.push_back(rel(store_done_));
  out.push_back(rel(max_done_));
  out.push_back(static_cast<std::uint64_t>(last_class_));
  return out;
}

void TimingEngine::fast_forward(std::uint64_t period, std::uint64_t iterations, const CycleStats& per_iter) {
  if (iterations == 0) return;
  const std::uint64_t shift = period * iterations;
  const std::uint64_t base = next_issue_;
  const auto move = [&](std::uint64_t& x) { x = std::max(x, base) + shift; };
  for (auto& x : reg_ready_) move(x);
  for (auto& x : sector_ready_) move(x);
  for (auto& x : row_ready_) move(x);
  for (auto& x : unit_free_) move(x);
  move(store_done_);
  move(max_done_);
  next_issue_ += shift;
  for (int c = 0; c < kOpClasses; ++c) {
    acc_.class_cycles[c] += per_iter.class_cycles[c] * iterations;
    acc_.class_instructions[c] += per_iter.class_instructions[c] * iterations;
  }
  for (int k = 0; k < kInstrKinds; ++k) acc_.kind_instructions[k] += per_iter.kind_instructions[k] * iterations;
}

}  // namespace dimcsim
