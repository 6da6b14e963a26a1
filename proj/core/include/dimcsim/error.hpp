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

#include <stdexcept>
#include <string>
#include <string_view>

namespace dimcsim {

enum class Errc {
  InvalidArgument,
  InvalidEncoding,
  NotCustom0,
  UnknownFunct3,
  ReservedBitsSet,
  Parse,
  Range,
  NotEligible,
  MalformedLayer,
  PlanMismatch,
  UndefinedRate,
  ZeroDenominator,
  NonPositiveRatio,
  Io,
};

std::string_view to_string(Errc code);

// All library failures are reported as this exception; `code()` says which
// contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

// Assembly text failure with a 1-based source location. `field` is set for
// range errors.
class AsmError : public Error {
 public:
  AsmError(Errc code, std::size_t line, std::size_t column, std::string field,
           const std::string& what);

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string field_;
};

// Execution failure tagged with the offending program counter (instruction
// index into the expanded stream).
class SimError : public Error {
 public:
  SimError(Errc code, std::size_t pc, const std::string& what);

  std::size_t pc() const noexcept { return pc_; }

 private:
  std::size_t pc_;
};

}  // namespace dimcsim
