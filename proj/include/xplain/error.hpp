// Copyright 2026 The xplain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef XPLAIN_ERROR_HPP_
#define XPLAIN_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace xplain {

// Failure categories surfaced by the library. Each maps onto a CLI exit code
// (see pipeline.hpp): configuration problems exit 1, everything else exits 2.
enum class ErrorKind {
  kInvalidArgument,
  kInvalidNetwork,
  kInfeasible,
  kUnbounded,
  kNumericalInstability,
  kBudgetExceeded,
  kUnsupportedBehavior,
  kUnplaceable,
  kDegenerateData,
  kAllZero,
  kSamplingFailure,
  kTooFewInstances,
  kParse,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kInvalidNetwork: return "InvalidNetwork";
    case ErrorKind::kInfeasible: return "Infeasible";
    case ErrorKind::kUnbounded: return "Unbounded";
    case ErrorKind::kNumericalInstability: return "NumericalInstability";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kUnsupportedBehavior: return "UnsupportedBehavior";
    case ErrorKind::kUnplaceable: return "Unplaceable";
    case ErrorKind::kDegenerateData: return "DegenerateData";
    case ErrorKind::kAllZero: return "AllZero";
    case ErrorKind::kSamplingFailure: return "SamplingFailure";
    case ErrorKind::kTooFewInstances: return "TooFewInstances";
    case ErrorKind::kParse: return "Parse";
  }
  return "Unknown";
}

}  // namespace xplain

#endif  // XPLAIN_ERROR_HPP_
