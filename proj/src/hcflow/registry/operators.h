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

// Built-in operator catalog and the Runner interface the runtime drives.
//
//   identity          1 -> 1   passes the token through
//   add_const {k}     1 -> 1   x + k
//   scale {k}         1 -> 1   x * k
//   clamp {lo, hi}    1 -> 1   min(max(x, lo), hi)
//   sum_window {n}    1 -> 1   sum of the last n inputs, current included
//   tee               1 -> m   copies the token to every output
//   sum               m -> 1   sum of one token from each input
//
// i64 arithmetic wraps modulo 2^64. f64 follows IEEE-754.

#ifndef HCFLOW_REGISTRY_OPERATORS_H_
#define HCFLOW_REGISTRY_OPERATORS_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hcflow/value.h"
#include "json.hpp"

namespace hcflow {

enum class RunnerRole { kTransform, kSource, kSink };

// Port datatypes of the shell a runner is instantiated for.
struct RunnerShape {
  std::vector<std::string> input_types;
  std::vector<std::string> output_types;
};

class Runner {
 public:
  virtual ~Runner() = default;

  virtual RunnerRole role() const { return RunnerRole::kTransform; }

  // One firing: one value per input port in, one value per output port out.
  // Sources ignore `inputs` and return nullopt once exhausted. Throws
  // Error{kOperatorFault} on values the operator cannot handle.
  virtual std::optional<std::vector<Value>> Fire(
      std::span<const Value> inputs) = 0;
};

std::span<const std::string_view> BuiltinOperators();

// Throws Error{kUnknownOperator} for names outside the catalog and
// Error{kInvalidArgument} for bad parameters or an arity the operator does
// not support.
std::unique_ptr<Runner> MakeOperatorRunner(std::string_view op,
                                           const nlohmann::json& params,
                                           const RunnerShape& shape);

}  // namespace hcflow

#endif  // HCFLOW_REGISTRY_OPERATORS_H_
