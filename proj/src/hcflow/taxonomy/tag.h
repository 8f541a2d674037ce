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

#ifndef HCFLOW_TAXONOMY_TAG_H_
#define HCFLOW_TAXONOMY_TAG_H_

#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace hcflow {

// A compatibility tag: a dot-separated path of descriptors running from the
// least specific level ("fpga") down to the most specific ("xcv100").
//
// Tags are always held in canonical form. Descriptors are lower-cased on
// parse and restricted to [a-z0-9_-]; there is always at least one.
class Tag {
 public:
  // Throws Error{kEmptyTag, kEmptyDescriptor, kIllegalCharacter}.
  static Tag Parse(std::string_view text);

  // Validates and canonicalizes an already split descriptor list.
  static Tag FromDescriptors(std::vector<std::string> descriptors);

  const std::vector<std::string>& descriptors() const { return descriptors_; }

  // Number of descriptors. Always >= 1.
  std::size_t specificity() const { return descriptors_.size(); }

  // Lower-case descriptors joined by ".".
  std::string ToString() const;

  friend bool operator==(const Tag&, const Tag&) = default;
  friend auto operator<=>(const Tag&, const Tag&) = default;

 private:
  explicit Tag(std::vector<std::string> descriptors)
      : descriptors_(std::move(descriptors)) {}

  std::vector<std::string> descriptors_;
};

inline Tag ParseTag(std::string_view text) { return Tag::Parse(text); }

inline std::size_t Specificity(const Tag& tag) { return tag.specificity(); }

// The platform-wide compatibility rule: an implementation may run on a
// processor iff the processor's tag sits at the same node as, or is an
// ancestor of, the implementation's tag in the descriptor tree. Equivalently
// the processor's descriptors are a prefix of the implementation's.
bool IsAncestorOrEqual(const Tag& processor_tag, const Tag& implementation_tag);

inline std::ostream& operator<<(std::ostream& os, const Tag& tag) {
  return os << tag.ToString();
}

}  // namespace hcflow

#endif  // HCFLOW_TAXONOMY_TAG_H_
