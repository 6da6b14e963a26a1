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

#include <array>
#include <charconv>
#include <optional>

#include <fmt/format.h>

#include "dimcsim/error.hpp"
#include "dimcsim/isa.hpp"

namespace dimcsim {

namespace {

struct FieldSpec {
  std::string_view name;
  unsigned lo;
  unsigned hi;
};

constexpr std::array<FieldSpec, 4> kDlIFields{{{"vs1", 0, 31}, {"nvec", 1, 4}, {"sec", 0, 3}, {"mask", 0, 15}}};
constexpr std::array<FieldSpec, 5> kDlMFields{
    {{"vs1", 0, 31}, {"nvec", 1, 4}, {"sec", 0, 3}, {"mask", 0, 15}, {"m_row", 0, 31}}};
constexpr std::array<FieldSpec, 5> kDcPFields{
    {{"vs1", 0, 31}, {"vd", 0, 31}, {"sh", 0, 1}, {"dh", 0, 1}, {"m_row", 0, 31}}};
constexpr std::array<FieldSpec, 6> kDcFFields{
    {{"vs1", 0, 31}, {"vd", 0, 31}, {"sh", 0, 1}, {"dh", 0, 1}, {"m_row", 0, 31}, {"bidx", 0, 3}}};

struct Token {
  std::string_view text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r' && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

std::optional<unsigned long> parse_number(std::string_view s) {
  int radix = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    radix = 16;
    s.remove_prefix(2);
  } else if (s.size() > 2 && s[0] == '0' && (s[1] == 'b' || s[1] == 'B')) {
    radix = 2;
    s.remove_prefix(2);
  }
  if (s.empty()) return std::nullopt;
  unsigned long value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value, radix);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

template <std::size_t N>
std::array<std::uint8_t, N> parse_fields(const std::array<FieldSpec, N>& specs, std::span<const Token> tokens,
                                         std::size_t line_no, const Token& mnemonic_tok) {
  std::array<std::optional<std::uint8_t>, N> values{};
  for (const Token& tok : tokens) {
    const auto eq = tok.text.find('=');
    if (eq == std::string_view::npos || eq == 0)
      throw AsmError(Errc::Parse, line_no, tok.column, "", fmt::format("expected name=value, got '{}'", tok.text));
    const auto name = tok.text.substr(0, eq);
    const auto value_text = tok.text.substr(eq + 1);
    std::size_t idx = N;
    for (std::size_t k = 0; k < N; ++k)
      if (specs[k].name == name) idx = k;
    if (idx == N)
      throw AsmError(Errc::Parse, line_no, tok.column, std::string(name),
                     fmt::format("unknown field '{}' for {}", name, mnemonic_tok.text));
    if (values[idx])
      throw AsmError(Errc::Parse, line_no, tok.column, std::string(name), fmt::format("duplicate field '{}'", name));
    const auto value = parse_number(value_text);
    if (!value)
      throw AsmError(Errc::Parse, line_no, tok.column + eq + 1, std::string(name),
                     fmt::format("malformed number '{}' for field '{}'", value_text, name));
    if (*value < specs[idx].lo || *value > specs[idx].hi)
      throw AsmError(Errc::Range, line_no, tok.column + eq + 1, std::string(name),
                     fmt::format("field {}={} out of range [{}, {}]", name, *value, specs[idx].lo, specs[idx].hi));
    values[idx] = static_cast<std::uint8_t>(*value);
  }
  std::array<std::uint8_t, N> out{};
  for (std::size_t k = 0; k < N; ++k) {
    if (!values[k])
      throw AsmError(Errc::Parse, line_no, mnemonic_tok.column, std::string(specs[k].name),
                     fmt::format("{} is missing field '{}'", mnemonic_tok.text, specs[k].name));
    out[k] = *values[k];
  }
  return out;
}

CustomInstruction parse_line(std::span<const Token> tokens, std::size_t line_no) {
  const Token& mn = tokens[0];
  const auto rest = tokens.subspan(1);
  if (mn.text == "dl.i") {
    auto f = parse_fields(kDlIFields, rest, line_no, mn);
    return DlI{f[0], f[1], f[2], f[3]};
  }
  if (mn.text == "dl.m") {
    auto f = parse_fields(kDlMFields, rest, line_no, mn);
    return DlM{f[0], f[1], f[2], f[3], f[4]};
  }
  if (mn.text == "dc.p") {
    auto f = parse_fields(kDcPFields, rest, line_no, mn);
    return DcP{f[0], f[1], f[2], f[3], f[4]};
  }
  if (mn.text == "dc.f") {
    auto f = parse_fields(kDcFFields, rest, line_no, mn);
    return DcF{f[0], f[1], f[2], f[3], f[4], f[5]};
  }
  throw AsmError(Errc::Parse, line_no, mn.column, "", fmt::format("unknown mnemonic '{}'", mn.text));
}

}  // namespace

std::vector<CustomInstruction> parse_assembly(std::string_view text) {
  std::vector<CustomInstruction> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    const auto tokens = tokenize(line);
    if (tokens.empty()) continue;
    out.push_back(parse_line(tokens, line_no));
  }
  return out;
}

std::vector<std::uint32_t> assemble(std::string_view text) {
  std::vector<std::uint32_t> words;
  for (const auto& instr : parse_assembly(text)) words.push_back(encode(instr));
  return words;
}

std::string format_instruction(const CustomInstruction& instr) {
  if (const auto* i = std::get_if<DlI>(&instr))
    return fmt::format("dl.i vs1={} nvec={} sec={} mask=0b{:04b}", i->vs1, i->nvec, i->sec, i->mask);
  if (const auto* i = std::get_if<DlM>(&instr))
    return fmt::format("dl.m vs1={} nvec={} sec={} mask=0b{:04b} m_row={}", i->vs1, i->nvec, i->sec, i->mask,
                       i->m_row);
  if (const auto* i = std::get_if<DcP>(&instr))
    return fmt::format("dc.p vs1={} vd={} sh={} dh={} m_row={}", i->vs1, i->vd, i->sh, i->dh, i->m_row);
  const auto& f = std::get<DcF>(instr);
  return fmt::format("dc.f vs1={} vd={} sh={} dh={} m_row={} bidx={}", f.vs1, f.vd, f.sh, f.dh, f.m_row, f.bidx);
}

std::string disassemble(std::span<const std::uint32_t> words) {
  std::string out;
  for (std::uint32_t w : words) {
    out += format_instruction(decode(w));
    out += '\n';
  }
  return out;
}

}  // namespace dimcsim
