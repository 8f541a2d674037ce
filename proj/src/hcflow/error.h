// Copyright 2026 The hcflow Authors
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

#ifndef HCFLOW_ERROR_H_
#define HCFLOW_ERROR_H_

#include <exception>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace hcflow {

// Every failure the engine can report. The numeric values are part of the
// C API (hcf_status) and must never be renumbered.
enum class ErrorCode : int {
  // taxonomy
  kEmptyTag = 1,
  kEmptyDescriptor = 2,
  kIllegalCharacter = 3,
  kUnknownId = 4,
  // graph
  kDuplicateId = 10,
  kUnknownShell = 11,
  kUnknownPort = 12,
  kDirectionMismatch = 13,
  kTypeMismatch = 14,
  kInputAlreadyBound = 15,
  kOutputAlreadyConnected = 16,
  kCycleDetected = 17,
  kInvalidArgument = 18,
  // registry
  kDuplicateProcessorId = 20,
  kBadTag = 21,
  kUnknownBackendKind = 22,
  kNotDeployable = 23,
  kUnknownProcessor = 24,
  kStaleHandle = 25,
  kUnknownOperator = 26,
  kOperatorFault = 27,
  // matcher
  kInvalidGraph = 30,
  kCommitFailed = 31,
  kPlanInfeasible = 32,
  // runtime
  kPutAfterClose = 40,
  kInvalidState = 41,
  // control
  kNotFound = 50,
  kParseError = 51,
  kIoError = 52,
  kInternal = 99,
};

// Stable machine-readable name, e.g. "PLAN_INFEASIBLE".
std::string_view ErrorCodeName(ErrorCode code);

// All codes, in declaration order.
std::span<const ErrorCode> AllErrorCodes();

class Error : public std::exception {
 public:
  Error(ErrorCode code, std::string message,
        nlohmann::json detail = nullptr)
      : code_(code), message_(std::move(message)), detail_(std::move(detail)) {}

  ErrorCode code() const { return code_; }
  const std::string& message() const { return message_; }
  // Structured payload (e.g. an infeasibility report); null when absent.
  const nlohmann::json& detail() const { return detail_; }

  const char* what() const noexcept override { return message_.c_str(); }

 private:
  ErrorCode code_;
  std::string message_;
  nlohmann::json detail_;
};

}  // namespace hcflow

#endif  // HCFLOW_ERROR_H_
