// Copyright 2026 The phonctl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or
// implied. See the License for the specific language governing
// permissions and limitations under the License.

#pragma once

/// @file
/// Error kinds shared by every module.

#include <stdexcept>
#include <string>
#include <string_view>

namespace phonctl {

enum class ErrorCode {
  kValidation,
  kOutOfBand,
  kDomainError,
  kBandEdge,
  kAssumptionL1Violated,
  kNonPhysical,
  kDegenerateTH,
  kHorizonExceeded,
  kUnsupportedMeasure,
  kHistoryUnderflow,
  kBudgetExceeded,
  kGridMismatch,
  kPacketNotSeparated,
  kSchema,
  kIo,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kValidation: return "Validation";
    case ErrorCode::kOutOfBand: return "OutOfBand";
    case ErrorCode::kDomainError: return "DomainError";
    case ErrorCode::kBandEdge: return "BandEdge";
    case ErrorCode::kAssumptionL1Violated: return "AssumptionL1Violated";
    case ErrorCode::kNonPhysical: return "NonPhysical";
    case ErrorCode::kDegenerateTH: return "DegenerateTH";
    case ErrorCode::kHorizonExceeded: return "HorizonExceeded";
    case ErrorCode::kUnsupportedMeasure: return "UnsupportedMeasure";
    case ErrorCode::kHistoryUnderflow: return "HistoryUnderflow";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kGridMismatch: return "GridMismatch";
    case ErrorCode::kPacketNotSeparated: return "PacketNotSeparated";
    case ErrorCode::kSchema: return "Schema";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace phonctl
