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

#ifndef HCFLOW_JSON_IO_H_
#define HCFLOW_JSON_IO_H_

#include <string>
#include <string_view>

#include "json.hpp"

namespace hcflow {

// Schema version stamped on every document the engine emits.
inline constexpr int kSchemaVersion = 1;

// Throws Error{kIoError} or Error{kParseError}.
nlohmann::json ReadJsonFile(const std::string& path);
nlohmann::json ParseJsonText(std::string_view text);

// Rejects documents declaring a `v` other than kSchemaVersion.
void CheckSchemaVersion(const nlohmann::json& doc, std::string_view what);

// Field accessors that report schema problems as Error{kParseError}.
const nlohmann::json& RequireField(const nlohmann::json& obj,
                                   std::string_view key, std::string_view what);
std::string RequireString(const nlohmann::json& obj, std::string_view key,
                          std::string_view what);

}  // namespace hcflow

#endif  // HCFLOW_JSON_IO_H_
