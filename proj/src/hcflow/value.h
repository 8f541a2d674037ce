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

#ifndef HCFLOW_VALUE_H_
#define HCFLOW_VALUE_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

namespace hcflow {

// Payload carried by a token. The alternative in use follows the datatype
// token of the port: "i64", "f64" or "bytes".
using Value = std::variant<std::int64_t, double, std::string>;

inline constexpr std::string_view kTypeI64 = "i64";
inline constexpr std::string_view kTypeF64 = "f64";
inline constexpr std::string_view kTypeBytes = "bytes";

bool IsKnownDatatype(std::string_view datatype);

// Parses one textual item for the given datatype. Throws Error{kParseError}.
Value ParseValue(std::string_view text, std::string_view datatype);

std::string FormatValue(const Value& value);
nlohmann::json ValueToJson(const Value& value);

}  // namespace hcflow

#endif  // HCFLOW_VALUE_H_
