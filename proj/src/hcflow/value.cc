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

#include "hcflow/value.h"

#include <charconv>
#include <cstdlib>
#include <sstream>

#include "hcflow/error.h"

namespace hcflow {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' ||
                        s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

}  // namespace

bool IsKnownDatatype(std::string_view datatype) {
  return datatype == kTypeI64 || datatype == kTypeF64 ||
         datatype == kTypeBytes;
}

Value ParseValue(std::string_view text, std::string_view datatype) {
  if (datatype == kTypeBytes) return std::string(text);
  std::string_view t = Trim(text);
  if (datatype == kTypeI64) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
      throw Error(ErrorCode::kParseError,
                  "not an i64 value: \"" + std::string(text) + "\"");
    }
    return v;
  }
  if (datatype == kTypeF64) {
    // from_chars for double is not available on every libstdc++ we target.
    std::string owned(t);
    char* end = nullptr;
    double v = std::strtod(owned.c_str(), &end);
    if (owned.empty() || end != owned.c_str() + owned.size()) {
      throw Error(ErrorCode::kParseError,
                  "not an f64 value: \"" + std::string(text) + "\"");
    }
    return v;
  }
  throw Error(ErrorCode::kParseError,
              "unsupported datatype \"" + std::string(datatype) + "\"");
}

std::string FormatValue(const Value& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else if constexpr (std::is_same_v<T, double>) {
          std::ostringstream os;
          os.precision(17);
          os << v;
          return os.str();
        } else {
          return std::to_string(v);
        }
      },
      value);
}

nlohmann::json ValueToJson(const Value& value) {
  return std::visit([](const auto& v) { return nlohmann::json(v); }, value);
}

}  // namespace hcflow
