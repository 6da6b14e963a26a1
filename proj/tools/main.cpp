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

#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

using namespace dimcsim::cli;

// lo:hi[:step], inclusive, additive step.
std::vector<int> parse_range(const std::string& text) {
  std::vector<int> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t colon = text.find(':', pos);
    const std::string field = text.substr(pos, colon == std::string::npos ? std::string::npos : colon - pos);
    std::size_t used = 0;
    const int v = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    parts.push_back(v);
    if (colon == std::string::npos) break;
    pos = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument(text);
  const int step = parts.size() == 3 ? parts[2] : 1;
  if (step < 1 || parts[1] < parts[0]) throw std::invalid_argument(text);
  std::vector<int> values;
  for (int v = parts[0]; v <= parts[1]; v += step) values.push_back(v);
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DIMC-extended RISC-V vector core simulator"};
  app.require_subcommand(1);

  SimulateOptions sim;
  std::string format = "csv";
  std::string workload, config, trace, output;
  double freq = 0;
  auto* simulate = app.add_subcommand("simulate", "Map, lower and time every layer of a workload");
  simulate->add_option("workload", workload, "Workload JSON file")->required();
  simulate->add_option("--timing", config, "Timing/baseline config JSON");
  simulate->add_option("--area-ratio", sim.area_ratio, "Baseline area / DIMC core area")->capture_default_str();
  simulate->add_flag("--verify", sim.verify, "Check outputs against the reference convolution");
  simulate->add_option("--seed", sim.seed, "Seed for verification tensors")->capture_default_str();
  simulate->add_option("--trace", trace, "Write a per-instruction trace CSV of one layer");
  std::string trace_layer;
  simulate->add_option("--trace-layer", trace_layer, "Layer to trace (default: first eligible)");
  simulate->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  simulate->add_option("--freq", freq, "Clock frequency in Hz (overrides the config)");
  simulate->add_option("-o,--output", output, "Report file (default: stdout)");
  simulate->add_option("-j,--jobs", sim.jobs, "Worker threads")->check(CLI::PositiveNumber);

  SweepOptions sw;
  std::string mode;
  std::vector<int> values;
  std::string range, sw_config, sw_output;
  double sw_freq = 0;
  auto* sweep = app.add_subcommand("sweep", "Tiling (ICH) or grouping (OCH) sweep with KH = KW = 2");
  sweep->add_option("mode", mode, "tiling or grouping")->required()->check(CLI::IsMember({"tiling", "grouping"}));
  auto* values_opt = sweep->add_option("--values", values, "Comma-separated sweep values")->delimiter(',');
  sweep->add_option("--range", range, "lo:hi[:step]")->excludes(values_opt);
  sweep->add_option("--fixed", sw.fixed_channels, "OCH (tiling) or ICH (grouping)")->capture_default_str();
  sweep->add_option("--hw", sw.h, "Input height and width")->capture_default_str();
  sweep->add_option("--bits", sw.bits, "Element width")->capture_default_str();
  sweep->add_option("--timing", sw_config, "Timing/baseline config JSON");
  sweep->add_option("--area-ratio", sw.area_ratio)->capture_default_str();
  sweep->add_option("--freq", sw_freq, "Clock frequency in Hz");
  sweep->add_option("-o,--output", sw_output, "CSV file (default: stdout)");

  std::string asm_in, asm_out;
  bool hex = false;
  auto* as = app.add_subcommand("asm", "Assemble DIMC custom instructions");
  as->add_option("input", asm_in)->required();
  as->add_option("-o,--output", asm_out, "Little-endian word file");
  as->add_flag("--hex", hex, "Print one hex word per line instead");

  std::string dis_in;
  auto* dis = app.add_subcommand("disasm", "Disassemble a little-endian word file");
  dis->add_option("input", dis_in)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInputError;
  }

  if (*simulate) {
    sim.workload = workload;
    if (!config.empty()) sim.config = config;
    if (!trace.empty()) sim.trace = trace;
    if (!trace_layer.empty()) sim.trace_layer = trace_layer;
    if (!output.empty()) sim.output = output;
    if (freq != 0) sim.freq_hz = freq;
    sim.format = format == "json" ? ReportFormat::Json : ReportFormat::Csv;
    return cmd_simulate(sim, std::cout, std::cerr);
  }
  if (*sweep) {
    sw.mode = mode == "tiling" ? SweepMode::Tiling : SweepMode::Grouping;
    sw.w = sw.h;
    if (!range.empty()) {
      try {
        sw.values = parse_range(range);
      } catch (const std::exception&) {
        std::cerr << "error: invalid --range '" << range << "' (expected lo:hi[:step] with lo <= hi, step >= 1)\n";
        return kExitInputError;
      }
    } else {
      sw.values = values.empty() ? default_sweep_values(sw.mode) : values;
    }
    if (!sw_config.empty()) sw.config = sw_config;
    if (!sw_output.empty()) sw.output = sw_output;
    if (sw_freq != 0) sw.freq_hz = sw_freq;
    return cmd_sweep(sw, std::cout, std::cerr);
  }
  if (*as) {
    std::optional<std::filesystem::path> out;
    if (!asm_out.empty()) out = asm_out;
    return cmd_asm(asm_in, out, hex, std::cout, std::cerr);
  }
  return cmd_disasm(dis_in, std::cout, std::cerr);
}
