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

#include "hcflow/error.h"

#include <array>

namespace hcflow {
namespace {

constexpr std::array kAllCodes = {
    ErrorCode::kEmptyTag,
    ErrorCode::kEmptyDescriptor,
    ErrorCode::kIllegalCharacter,
    ErrorCode::kUnknownId,
    ErrorCode::kDuplicateId,
    ErrorCode::kUnknownShell,
    ErrorCode::kUnknownPort,
    ErrorCode::kDirectionMismatch,
    ErrorCode::kTypeMismatch,
    ErrorCode::kInputAlreadyBound,
    ErrorCode::kOutputAlreadyConnected,
    ErrorCode::kCycleDetected,
    ErrorCode::kInvalidArgument,
    ErrorCode::kDuplicateProcessorId,
    ErrorCode::kBadTag,
    ErrorCode::kUnknownBackendKind,
    ErrorCode::kNotDeployable,
    ErrorCode::kUnknownProcessor,
    ErrorCode::kStaleHandle,
    ErrorCode::kUnknownOperator,
    ErrorCode::kOperatorFault,
    ErrorCode::kInvalidGraph,
    ErrorCode::kCommitFailed,
    ErrorCode::kPlanInfeasible,
    ErrorCode::kPutAfterClose,
    ErrorCode::kInvalidState,
    ErrorCode::kNotFound,
    ErrorCode::kParseError,
    ErrorCode::kIoError,
    ErrorCode::kInternal,
};

}  // namespace

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyTag: return "EMPTY_TAG";
    case ErrorCode::kEmptyDescriptor: return "EMPTY_DESCRIPTOR";
    case ErrorCode::kIllegalCharacter: return "ILLEGAL_CHARACTER";
    case ErrorCode::kUnknownId: return "UNKNOWN_ID";
    case ErrorCode::kDuplicateId: return "DUPLICATE_ID";
    case ErrorCode::kUnknownShell: return "UNKNOWN_SHELL";
    case ErrorCode::kUnknownPort: return "UNKNOWN_PORT";
    case ErrorCode::kDirectionMismatch: return "DIRECTION_MISMATCH";
    case ErrorCode::kTypeMismatch: return "TYPE_MISMATCH";
    case ErrorCode::kInputAlreadyBound: return "INPUT_ALREADY_BOUND";
    case ErrorCode::kOutputAlreadyConnected: return "OUTPUT_ALREADY_CONNECTED";
    case ErrorCode::kCycleDetected: return "CYCLE_DETECTED";
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kDuplicateProcessorId: return "DUPLICATE_PROCESSOR_ID";
    case ErrorCode::kBadTag: return "BAD_TAG";
    case ErrorCode::kUnknownBackendKind: return "UNKNOWN_BACKEND_KIND";
    case ErrorCode::kNotDeployable: return "NOT_DEPLOYABLE";
    case ErrorCode::kUnknownProcessor: return "UNKNOWN_PROCESSOR";
    case ErrorCode::kStaleHandle: return "STALE_HANDLE";
    case ErrorCode::kUnknownOperator: return "UNKNOWN_OPERATOR";
    case ErrorCode::kOperatorFault: return "OPERATOR_FAULT";
    case ErrorCode::kInvalidGraph: return "INVALID_GRAPH";
    case ErrorCode::kCommitFailed: return "COMMIT_FAILED";
    case ErrorCode::kPlanInfeasible: return "PLAN_INFEASIBLE";
    case ErrorCode::kPutAfterClose: return "PUT_AFTER_CLOSE";
    case ErrorCode::kInvalidState: return "INVALID_STATE";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kIoError: return "IO_ERROR";
    case ErrorCode::kInternal: return "INTERNAL";
  }
  return "INTERNAL";
}

std::span<const ErrorCode> AllErrorCodes() { return kAllCodes; }

}  // namespace hcflow
