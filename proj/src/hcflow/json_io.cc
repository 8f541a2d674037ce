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

#include "hcflow/json_io.h"

#include <fstream>
#include <sstream>

#include "hcflow/error.h"

namespace hcflow {

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, path + ": " + e.what());
  }
}

nlohmann::json ParseJsonText(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

void CheckSchemaVersion(const nlohmann::json& doc, std::string_view what) {
  if (!doc.is_object()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + " must be a JSON object");
  }
  auto v = doc.find("v");
  if (v != doc.end() && (!v->is_number_integer() || *v != kSchemaVersion)) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": unsupported schema version " +
                    v->dump());
  }
}

const nlohmann::json& RequireField(const nlohmann::json& obj,
                                   std::string_view key,
                                   std::string_view what) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + " must be a JSON object");
  }
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": missing field \"" + std::string(key) +
                    "\"");
  }
  return *it;
}

std::string RequireString(const nlohmann::json& obj, std::string_view key,
                          std::string_view what) {
  const auto& f = RequireField(obj, key, what);
  if (!f.is_string()) {
    throw Error(ErrorCode::kParseError,
                std::string(what) + ": field \"" + std::string(key) +
                    "\" must be a string");
  }
  return f.get<std::string>();
}

}  // namespace hcflow
