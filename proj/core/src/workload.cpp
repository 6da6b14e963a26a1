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

#include "dimcsim/workload.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "dimcsim/error.hpp"

namespace dimcsim {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void apply_precision(const json& j, LayerPrecision& p) {
  if (j.contains("bits")) p.bits = j.at("bits").get<int>();
  if (j.contains("input_signed")) p.input_signed = j.at("input_signed").get<bool>();
  if (j.contains("weight_signed")) p.weight_signed = j.at("weight_signed").get<bool>();
}

void apply_quant(const json& j, QuantConfig& q) {
  if (j.contains("right_shift")) q.right_shift = j.at("right_shift").get<int>();
  if (j.contains("out_bits")) q.out_bits = j.at("out_bits").get<int>();
}

int get_int(const json& entry, const char* key, int fallback, bool required) {
  if (!entry.contains(key)) {
    if (required) throw Error(Errc::Parse, fmt::format("missing required field '{}'", key));
    return fallback;
  }
  const json& v = entry.at(key);
  if (!v.is_number_integer()) throw Error(Errc::Parse, fmt::format("field '{}' must be an integer", key));
  return v.get<int>();
}

WorkloadLayer parse_layer(const json& entry, const LayerPrecision& default_precision, const QuantConfig& default_quant,
                          std::size_t index) {
  if (!entry.is_object()) throw Error(Errc::Parse, "layer entry must be an object");
  WorkloadLayer wl;
  LayerDescriptor& d = wl.layer;
  d.name = entry.contains("name") ? entry.at("name").get<std::string>() : fmt::format("layer{}", index);
  const std::string kind = entry.contains("kind") ? entry.at("kind").get<std::string>() : "conv";
  if (kind == "conv") {
    d.kind = LayerKind::Conv;
  } else if (kind == "fc") {
    d.kind = LayerKind::FullyConnected;
  } else {
    throw Error(Errc::Parse, fmt::format("unknown layer kind '{}' (expected conv or fc)", kind));
  }
  const bool conv = d.kind == LayerKind::Conv;
  d.ich = get_int(entry, "ich", 1, true);
  d.och = get_int(entry, "och", 1, true);
  d.h = get_int(entry, "h", 1, conv);
  d.w = get_int(entry, "w", 1, conv);
  d.kh = get_int(entry, "kh", 1, conv);
  d.kw = get_int(entry, "kw", 1, conv);
  d.stride = get_int(entry, "stride", 1, false);
  d.padding = get_int(entry, "padding", 0, false);
  d.precision = default_precision;
  apply_precision(entry, d.precision);
  wl.quant = default_quant;
  apply_quant(entry, wl.quant);
  d.validate();
  return wl;
}

}  // namespace

WorkloadFile parse_workload(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw Error(Errc::Parse, fmt::format("workload {}:{}: {}", line, col, e.what()));
  }
  if (!root.is_object()) throw Error(Errc::Parse, "workload must be a JSON object");

  WorkloadFile wf;
  LayerPrecision precision;
  QuantConfig quant;
  try {
    wf.network = root.value("network", std::string("unnamed"));
    if (root.contains("precision")) apply_precision(root.at("precision"), precision);
    if (root.contains("quant")) apply_quant(root.at("quant"), quant);
  } catch (const json::exception& e) {
    throw Error(Errc::Parse, fmt::format("workload header: {}", e.what()));
  }
  if (!root.contains("layers") || !root.at("layers").is_array())
    throw Error(Errc::Parse, "workload needs a 'layers' array");
  const json& layers = root.at("layers");
  if (layers.empty()) throw Error(Errc::Parse, "workload has no layers");

  for (std::size_t i = 0; i < layers.size(); ++i) {
    const json& entry = layers[i];
    const std::string label = entry.is_object() && entry.contains("name") && entry.at("name").is_string()
                                  ? fmt::format("layers[{}] ('{}')", i, entry.at("name").get<std::string>())
                                  : fmt::format("layers[{}]", i);
    try {
      wf.layers.push_back(parse_layer(entry, precision, quant, i));
    } catch (const json::exception& e) {
      throw Error(Errc::Parse, fmt::format("{}: {}", label, e.what()));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: {}", label, e.what()));
    }
  }
  return wf;
}

WorkloadFile load_workload(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, fmt::format("cannot open workload '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_workload(ss.str());
}

}  // namespace dimcsim
