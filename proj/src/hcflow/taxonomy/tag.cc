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

#include "hcflow/taxonomy/tag.h"

#include <algorithm>

#include "hcflow/error.h"

namespace hcflow {
namespace {

constexpr char kSeparator = '.';

bool IsDescriptorChar(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-';
}

char FoldCase(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

std::string CanonicalDescriptor(std::string_view raw, std::string_view whole) {
  if (raw.empty()) {
    throw Error(ErrorCode::kEmptyDescriptor,
                "empty descriptor in tag \"" + std::string(whole) + "\"");
  }
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    char folded = FoldCase(c);
    if (!IsDescriptorChar(folded)) {
      throw Error(ErrorCode::kIllegalCharacter,
                  "illegal character '" + std::string(1, c) + "' in tag \"" +
                      std::string(whole) + "\"");
    }
    out.push_back(folded);
  }
  return out;
}

}  // namespace

Tag Tag::Parse(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::kEmptyTag, "empty tag");
  std::vector<std::string> descriptors;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = text.find(kSeparator, start);
    std::string_view piece = text.substr(
        start, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - start);
    descriptors.push_back(CanonicalDescriptor(piece, text));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return Tag(std::move(descriptors));
}

Tag Tag::FromDescriptors(std::vector<std::string> descriptors) {
  if (descriptors.empty()) throw Error(ErrorCode::kEmptyTag, "empty tag");
  for (auto& d : descriptors) {
    if (d.find(kSeparator) != std::string::npos) {
      throw Error(ErrorCode::kIllegalCharacter,
                  "descriptor \"" + d + "\" contains the separator");
    }
    d = CanonicalDescriptor(d, d);
  }
  return Tag(std::move(descriptors));
}

std::string Tag::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < descriptors_.size(); ++i) {
    if (i) out.push_back(kSeparator);
    out += descriptors_[i];
  }
  return out;
}

bool IsAncestorOrEqual(const Tag& processor_tag,
                       const Tag& implementation_tag) {
  const auto& p = processor_tag.descriptors();
  const auto& i = implementation_tag.descriptors();
  if (p.size() > i.size()) return false;
  return std::equal(p.begin(), p.end(), i.begin());
}

}  // namespace hcflow
