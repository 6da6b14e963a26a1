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

#include "dimcsim/error.hpp"

#include <fmt/format.h>

namespace dimcsim {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::InvalidArgument: return "invalid-argument";
    case Errc::InvalidEncoding: return "invalid-encoding";
    case Errc::NotCustom0: return "not-custom-0";
    case Errc::UnknownFunct3: return "unknown-funct3";
    case Errc::ReservedBitsSet: return "reserved-bits-set";
    case Errc::Parse: return "parse-error";
    case Errc::Range: return "range-error";
    case Errc::NotEligible: return "not-dimc-eligible";
    case Errc::MalformedLayer: return "malformed-layer";
    case Errc::PlanMismatch: return "plan-mismatch";
    case Errc::UndefinedRate: return "undefined-rate";
    case Errc::ZeroDenominator: return "zero-denominator";
    case Errc::NonPositiveRatio: return "non-positive-ratio";
    case Errc::Io: return "io-error";
  }
  return "unknown";
}

AsmError::AsmError(Errc code, std::size_t line, std::size_t column, std::string field,
                   const std::string& what)
    : Error(code, fmt::format("{}:{}: {}", line, column, what)),
      line_(line),
      column_(column),
      field_(std::move(field)) {}

SimError::SimError(Errc code, std::size_t pc, const std::string& what)
    : Error(code, fmt::format("pc {}: {}", pc, what)), pc_(pc) {}

}  // namespace dimcsim
