// Copyright 2026 The irb Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace irb {

enum class ErrorKind {
  kNonUnitaryInput,
  kDimensionMismatch,
  kNotTracePreserving,
  kInvalidState,
  kInvalidEffect,
  kUnsupportedDimension,
  kOutOfRange,
  kInvalidDistribution,
  kUnphysicalParameters,
  kInsufficientData,
  kMissingRawData,
  kDivisionByZero,
  kParseError,
  kInvalidConfig,
};

constexpr std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNonUnitaryInput: return "NonUnitaryInput";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotTracePreserving: return "NotTracePreserving";
    case ErrorKind::kInvalidState: return "InvalidState";
    case ErrorKind::kInvalidEffect: return "InvalidEffect";
    case ErrorKind::kUnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::kOutOfRange: return "OutOfRange";
    case ErrorKind::kInvalidDistribution: return "InvalidDistribution";
    case ErrorKind::kUnphysicalParameters: return "UnphysicalParameters";
    case ErrorKind::kInsufficientData: return "InsufficientData";
    case ErrorKind::kMissingRawData: return "MissingRawData";
    case ErrorKind::kDivisionByZero: return "DivisionByZero";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the kinds above so
/// callers (the CLI in particular) can map it onto a stable exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind), message_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

/// Input errors are the caller's fault (bad file, bad parameter); the rest are
/// runtime failures.
constexpr bool is_input_error(ErrorKind kind) {
  return kind == ErrorKind::kParseError || kind == ErrorKind::kInvalidConfig;
}

}  // namespace irb
