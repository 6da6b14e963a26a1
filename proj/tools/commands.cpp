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

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <nlohmann/json.hpp>

#include "dimcsim/core_sim.hpp"
#include "dimcsim/error.hpp"
#include "dimcsim/isa.hpp"
#include "dimcsim/lowering.hpp"
#include "dimcsim/reference.hpp"
#include "dimcsim/workload.hpp"

namespace dimcsim::cli {

namespace {

namespace fs = std::filesystem;

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, fmt::format("cannot open '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to `path`, or to `fallback` when no path is given.
template <class Fn>
void emit(const std::optional<fs::path>& path, std::ostream& fallback, Fn&& fn) {
  if (!path) {
    fn(fallback);
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw Error(Errc::Io, fmt::format("cannot write '{}'", path->string()));
  fn(f);
  if (!f) throw Error(Errc::Io, fmt::format("write to '{}' failed", path->string()));
}

struct LayerResult {
  bool eligible = false;
  std::string reason;  // ineligible layers
  PerfReport report;
  std::vector<std::string> failures;  // verification mismatches
};

std::string first_mismatch(const FeatureMap& got, const FeatureMap& want) {
  if (got.channels != want.channels || got.height != want.height || got.width != want.width)
    return fmt::format("shape {}x{}x{} != {}x{}x{}", got.channels, got.height, got.width, want.channels,
                       want.height, want.width);
  for (int c = 0; c < want.channels; ++c)
    for (int y = 0; y < want.height; ++y)
      for (int x = 0; x < want.width; ++x)
        if (got.at(c, y, x) != want.at(c, y, x))
          return fmt::format("output ({}, {}, {}) = {}, oracle {}", c, y, x, got.at(c, y, x), want.at(c, y, x));
  return {};
}

void verify_layer(const WorkloadLayer& wl, const MappingPlan& plan, const SimConfig& cfg, const CycleStats& estimated,
                  std::uint64_t seed, LayerResult& result) {
  std::mt19937_64 rng(seed);
  const KernelSet weights = random_weights(wl.layer, rng);
  const FeatureMap input = random_input(wl.layer, rng);
  for (FinalMode mode : {FinalMode::Quantized, FinalMode::Partial}) {
    const char* label = mode == FinalMode::Quantized ? "dc.f flow" : "dc.p flow";
    const LoweredLayer lowered = lower(wl.layer, plan, {mode, wl.quant});
    const LayerRun run = run_layer(lowered, build_memory_image(lowered, weights, input), cfg.timing);
    const std::string diff = first_mismatch(run.output, reference_conv(wl.layer, weights, input, mode, wl.quant));
    if (!diff.empty()) result.failures.push_back(fmt::format("{}: {}", label, diff));
    if (mode == FinalMode::Quantized && run.outcome.stats != estimated)
      result.failures.push_back(fmt::format("{}: compressed timing {} cycles, full run {} cycles", label,
                                            estimated.total_cycles, run.outcome.stats.total_cycles));
  }
}

LayerResult simulate_layer(const WorkloadLayer& wl, const SimConfig& cfg, const SimulateOptions& opts,
                           std::uint64_t seed) {
  LayerResult result;
  MappingPlan plan;
  try {
    plan = plan_mapping(wl.layer);
  } catch (const Error& e) {
    if (e.code() != Errc::NotEligible) throw;
    result.reason = e.what();
    return result;
  }
  result.eligible = true;
  const LoweredLayer lowered = lower(wl.layer, plan, {FinalMode::Quantized, wl.quant});
  const CycleStats stats = estimate_timing(lowered.program, cfg.timing, true);
  result.report = make_report(wl.layer.name, ops_count(wl.layer), stats, baseline_cycles(wl.layer, cfg.baseline),
                              opts.area_ratio, cfg.timing.freq_hz);
  if (opts.verify) verify_layer(wl, plan, cfg, stats, seed, result);
  return result;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads; the first exception by
// index is rethrown.
template <class Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n)));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void write_trace(const WorkloadFile& wf, const SimConfig& cfg, const SimulateOptions& opts) {
  const auto eligible = [](const LayerDescriptor& layer) {
    try {
      plan_mapping(layer);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  const WorkloadLayer* chosen = nullptr;
  for (const WorkloadLayer& wl : wf.layers) {
    if (opts.trace_layer ? wl.layer.name == *opts.trace_layer : eligible(wl.layer)) {
      chosen = &wl;
      break;
    }
  }
  if (!chosen)
    throw Error(Errc::InvalidArgument, opts.trace_layer ? fmt::format("no layer named '{}' to trace", *opts.trace_layer)
                                                        : std::string("no eligible layer to trace"));
  const LoweredLayer lowered = lower(chosen->layer, plan_mapping(chosen->layer), {FinalMode::Quantized, chosen->quant});
  std::mt19937_64 rng(opts.seed);
  const KernelSet weights = random_weights(chosen->layer, rng);
  const FeatureMap input = random_input(chosen->layer, rng);
  ExecOptions exec;
  exec.trace = true;
  const LayerRun run = run_layer(lowered, build_memory_image(lowered, weights, input), cfg.timing, exec);
  emit(opts.trace, std::cout, [&](std::ostream& os) { write_trace_csv(os, run.outcome.trace); });
}

int input_error(std::ostream& err, const std::exception& e) {
  fmt::print(err, "error: {}\n", e.what());
  return kExitInputError;
}

}  // namespace

SimConfig load_config(const std::optional<fs::path>& path, std::optional<double> freq_hz) {
  SimConfig cfg;
  if (path) {
    const std::string text = read_text(*path);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(Errc::Parse, fmt::format("{}: {}", path->string(), e.what()));
    }
    if (!j.is_object()) throw Error(Errc::Parse, fmt::format("{}: config must be a JSON object", path->string()));
    cfg.timing = timing_from_json(j);
    cfg.baseline = BaselineCostConfig::from_timing(cfg.timing);
    if (j.contains("baseline")) cfg.baseline = baseline_from_json(j.at("baseline"), cfg.baseline);
  }
  if (freq_hz) {
    cfg.timing.freq_hz = *freq_hz;
    cfg.timing.validate();
  }
  return cfg;
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  WorkloadFile wf;
  SimConfig cfg;
  try {
    if (!(opts.area_ratio > 0)) throw Error(Errc::NonPositiveRatio, fmt::format("area ratio must be positive, got {}", opts.area_ratio));
    wf = load_workload(opts.workload);
    cfg = load_config(opts.config, opts.freq_hz);
  } catch (const Error& e) {
    return input_error(err, e);
  }

  std::vector<LayerResult> results(wf.layers.size());
  try {
    parallel_for(wf.layers.size(), opts.jobs, [&](std::size_t i) {
      results[i] = simulate_layer(wf.layers[i], cfg, opts, opts.seed + i);
    });
    if (opts.trace) write_trace(wf, cfg, opts);
  } catch (const Error& e) {
    return input_error(err, e);
  }

  std::vector<PerfReport> reports;
  nlohmann::json ineligible = nlohmann::json::array();
  bool failed = false;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const LayerResult& r = results[i];
    if (!r.eligible) {
      fmt::print(err, "skipped layers[{}] '{}': {}\n", i, wf.layers[i].layer.name, r.reason);
      ineligible.push_back({{"index", i}, {"layer", wf.layers[i].layer.name}, {"reason", r.reason}});
      continue;
    }
    for (const std::string& f : r.failures) fmt::print(err, "verification failed for '{}': {}\n", r.report.layer, f);
    failed = failed || !r.failures.empty();
    reports.push_back(r.report);
  }

  try {
    emit(opts.output, out, [&](std::ostream& os) {
      if (opts.format == ReportFormat::Csv) {
        write_reports_csv(os, reports);
        return;
      }
      nlohmann::json doc;
      doc["network"] = wf.network;
      doc["area_ratio"] = opts.area_ratio;
      doc["freq_hz"] = cfg.timing.freq_hz;
      doc["layers"] = nlohmann::json::array();
      for (const PerfReport& r : reports) doc["layers"].push_back(to_json(r));
      doc["ineligible"] = ineligible;
      os << doc.dump(2) << '\n';
    });
  } catch (const Error& e) {
    return input_error(err, e);
  }
  if (opts.verify && !failed) fmt::print(err, "verified {} layers against the reference convolution\n", reports.size());
  return failed ? kExitVerifyFailed : kExitOk;
}

std::vector<int> default_sweep_values(SweepMode mode) {
  if (mode == SweepMode::Tiling) return {32, 64, 128, 256, 512, 1024, 2048};
  return {8, 16, 32, 64, 128, 256, 512};
}

std::vector<SweepPoint> run_sweep(const SweepOptions& opts) {
  if (opts.values.empty()) throw Error(Errc::InvalidArgument, "sweep range is empty");
  for (std::size_t i = 0; i < opts.values.size(); ++i) {
    if (opts.values[i] < 1)
      throw Error(Errc::InvalidArgument, fmt::format("sweep value {} must be >= 1", opts.values[i]));
    if (i > 0 && opts.values[i] <= opts.values[i - 1])
      throw Error(Errc::InvalidArgument, "sweep values must be strictly increasing");
  }
  const SimConfig cfg = load_config(opts.config, opts.freq_hz);
  std::vector<SweepPoint> points;
  for (int v : opts.values) {
    LayerDescriptor layer;
    layer.name = fmt::format("{}_{}", opts.mode == SweepMode::Tiling ? "ich" : "och", v);
    layer.ich = opts.mode == SweepMode::Tiling ? v : opts.fixed_channels;
    layer.och = opts.mode == SweepMode::Tiling ? opts.fixed_channels : v;
    layer.h = opts.h;
    layer.w = opts.w;
    layer.kh = layer.kw = opts.kernel;
    layer.precision.bits = opts.bits;
    const MappingPlan plan = plan_mapping(layer);
    const LoweredLayer lowered = lower(layer, plan);
    const CycleStats stats = estimate_timing(lowered.program, cfg.timing, true);
    const PerfReport r = make_report(layer.name, ops_count(layer), stats, baseline_cycles(layer, cfg.baseline),
                                     opts.area_ratio, cfg.timing.freq_hz);
    points.push_back({layer.ich, layer.och, plan.tiling_factor, plan.group_count, r.dimc_cycles, r.baseline_cycles,
                      r.speedup, r.gops});
  }
  return points;
}

void write_sweep_csv(std::ostream& out, SweepMode mode, const std::vector<SweepPoint>& points) {
  out << "param,value,ich,och,T,group_count,dimc_cycles,baseline_cycles,speedup,gops\n";
  const char* param = mode == SweepMode::Tiling ? "ich" : "och";
  for (const SweepPoint& p : points)
    fmt::print(out, "{},{},{},{},{},{},{},{},{:.6f},{:.6f}\n", param, mode == SweepMode::Tiling ? p.ich : p.och, p.ich,
               p.och, p.tiling_factor, p.group_count, p.dimc_cycles, p.baseline_cycles, p.speedup, p.gops);
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const std::vector<SweepPoint> points = run_sweep(opts);
    emit(opts.output, out, [&](std::ostream& os) { write_sweep_csv(os, opts.mode, points); });
  } catch (const Error& e) {
    return input_error(err, e);
  }
  return kExitOk;
}

int cmd_asm(const fs::path& input, const std::optional<fs::path>& output, bool hex, std::ostream& out,
            std::ostream& err) {
  try {
    const std::vector<std::uint32_t> words = assemble(read_text(input));
    if (hex) {
      emit(output, out, [&](std::ostream& os) {
        for (std::uint32_t w : words) fmt::print(os, "{:08x}\n", w);
      });
    } else {
      if (!output) throw Error(Errc::InvalidArgument, "binary output needs -o <file> (or use --hex)");
      emit(output, out, [&](std::ostream& os) { write_words(os, words); });
    }
  } catch (const AsmError& e) {
    fmt::print(err, "{}:{}\n", input.string(), e.what());
    return kExitInputError;
  } catch (const Error& e) {
    return input_error(err, e);
  }
  return kExitOk;
}

int cmd_disasm(const fs::path& input, std::ostream& out, std::ostream& err) {
  try {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw Error(Errc::Io, fmt::format("cannot open '{}'", input.string()));
    out << disassemble(read_words(in));
  } catch (const Error& e) {
    return input_error(err, e);
  }
  return kExitOk;
}

}  // namespace dimcsim::cli
