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

#ifndef HCFLOW_TAXONOMY_TAG_INDEX_H_
#define HCFLOW_TAXONOMY_TAG_INDEX_H_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>

#include "hcflow/taxonomy/tag.h"

namespace hcflow {

// Descriptor trie with identifiers attached to nodes. A lookup walks the
// path spelled by an implementation tag and collects every identifier seen
// on the way, which is exactly the set of ancestor-or-equal tags.
class TagIndex {
 public:
  TagIndex() = default;
  TagIndex(TagIndex&&) = default;
  TagIndex& operator=(TagIndex&&) = default;

  // Throws Error{kDuplicateId} if `id` is already attached somewhere.
  void Insert(const Tag& tag, std::string id);

  // Throws Error{kUnknownId}. Prunes nodes left empty.
  void Remove(std::string_view id);

  std::set<std::string> Candidates(const Tag& implementation_tag) const;

  bool Contains(std::string_view id) const;
  std::size_t size() const { return locations_.size(); }
  bool empty() const { return locations_.empty(); }

 private:
  struct Node {
    std::map<std::string, std::unique_ptr<Node>, std::less<>> children;
    std::set<std::string, std::less<>> ids;
  };

  Node root_;
  std::unordered_map<std::string, Tag> locations_;
};

}  // namespace hcflow

#endif  // HCFLOW_TAXONOMY_TAG_INDEX_H_
