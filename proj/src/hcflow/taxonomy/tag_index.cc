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

#include "hcflow/taxonomy/tag_index.h"

#include <vector>

#include "hcflow/error.h"

namespace hcflow {

void TagIndex::Insert(const Tag& tag, std::string id) {
  if (locations_.count(id)) {
    throw Error(ErrorCode::kDuplicateId, "id \"" + id + "\" already indexed");
  }
  Node* node = &root_;
  for (const auto& d : tag.descriptors()) {
    auto& child = node->children[d];
    if (!child) child = std::make_unique<Node>();
    node = child.get();
  }
  node->ids.insert(id);
  locations_.emplace(std::move(id), tag);
}

void TagIndex::Remove(std::string_view id) {
  auto it = locations_.find(std::string(id));
  if (it == locations_.end()) {
    throw Error(ErrorCode::kUnknownId,
                "id \"" + std::string(id) + "\" is not indexed");
  }
  // Walk down remembering the path so empty nodes can be pruned bottom-up.
  std::vector<Node*> path{&root_};
  for (const auto& d : it->second.descriptors()) {
    path.push_back(path.back()->children.find(d)->second.get());
  }
  path.back()->ids.erase(it->first);
  const auto& descriptors = it->second.descriptors();
  for (std::size_t depth = descriptors.size(); depth > 0; --depth) {
    Node* node = path[depth];
    if (!node->ids.empty() || !node->children.empty()) break;
    path[depth - 1]->children.erase(descriptors[depth - 1]);
  }
  locations_.erase(it);
}

std::set<std::string> TagIndex::Candidates(const Tag& implementation_tag) const {
  std::set<std::string> out;
  const Node* node = &root_;
  for (const auto& d : implementation_tag.descriptors()) {
    auto it = node->children.find(d);
    if (it == node->children.end()) break;
    node = it->second.get();
    out.insert(node->ids.begin(), node->ids.end());
  }
  return out;
}

bool TagIndex::Contains(std::string_view id) const {
  return locations_.count(std::string(id)) != 0;
}

}  // namespace hcflow
