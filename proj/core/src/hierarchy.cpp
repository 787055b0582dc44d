// Copyright 2026 The SHDH Authors.
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

#include "shdh/hierarchy.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_set>
#include <utility>

#include "shdh/error.hpp"
#include "text.hpp"

namespace shdh {

LayerWeights layer_weights(int height) {
  if (height < 2) {
    throw Error(ErrorCode::kHeightTooSmall,
                "taxonomy height must be at least 2, got " + std::to_string(height));
  }
  LayerWeights w;
  w.values_.assign(static_cast<std::size_t>(height), 0.0);
  const double denom = static_cast<double>(height) * static_cast<double>(height - 1);
  for (int k = 2; k <= height; ++k) {
    w.values_[static_cast<std::size_t>(k - 1)] = 2.0 * static_cast<double>(height + 1 - k) / denom;
  }
  return w;
}

const Taxonomy::Node& Taxonomy::node(NodeId id) const {
  if (!contains(id)) {
    throw Error(ErrorCode::kUnknownLabel, "node id " + std::to_string(to_index(id)) +
                                              " is not part of the taxonomy");
  }
  return nodes_[to_index(id)];
}

std::optional<NodeId> Taxonomy::find(std::string_view name) const {
  const auto it = by_name_.find(std::string(name));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

NodeId Taxonomy::id_of(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error(ErrorCode::kUnknownLabel, "unknown label '" + std::string(name) + "'");
}

int Taxonomy::shared_depth(NodeId a, NodeId b) const {
  const auto pa = path(a);
  const auto pb = path(b);
  const std::size_t n = std::min(pa.size(), pb.size());
  std::size_t k = 0;
  while (k < n && pa[k] == pb[k]) ++k;
  return static_cast<int>(k);
}

Taxonomy parse_taxonomy(std::string_view text) {
  Taxonomy tax;
  auto intern = [&tax](std::string_view name) {
    auto [it, inserted] = tax.by_name_.try_emplace(std::string(name),
                                                   NodeId{static_cast<std::uint32_t>(tax.nodes_.size())});
    if (inserted) {
      Taxonomy::Node node;
      node.name = std::string(name);
      tax.nodes_.push_back(std::move(node));
    }
    return it->second;
  };

  std::set<std::pair<std::uint32_t, std::uint32_t>> edges;
  internal::for_each_record(text, [&](std::size_t line_no, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kBadFormat,
                  "line " + std::to_string(line_no) + ": expected 'parent<TAB>child'");
    }
    const auto parent_name = internal::trim(line.substr(0, tab));
    const auto child_name = internal::trim(line.substr(tab + 1));
    if (parent_name.empty() || child_name.empty()) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": empty node name");
    }
    const NodeId parent = intern(parent_name);
    const NodeId child = intern(child_name);
    if (parent == child) {
      throw Error(ErrorCode::kCycleDetected,
                  "line " + std::to_string(line_no) + ": self loop on '" + std::string(child_name) + "'");
    }
    if (!edges.emplace(to_index(parent), to_index(child)).second) {
      throw Error(ErrorCode::kDuplicateEdge, "line " + std::to_string(line_no) + ": duplicate edge '" +
                                                 std::string(parent_name) + "' -> '" +
                                                 std::string(child_name) + "'");
    }
    auto& child_node = tax.nodes_[to_index(child)];
    if (child_node.parent) {
      throw Error(ErrorCode::kMultipleParents, "line " + std::to_string(line_no) + ": '" +
                                                   std::string(child_name) + "' already has a parent");
    }
    child_node.parent = parent;
    tax.nodes_[to_index(parent)].children.push_back(child);
  });

  if (tax.nodes_.empty()) throw Error(ErrorCode::kEmptyInput, "taxonomy has no edges");

  std::vector<NodeId> roots;
  for (std::uint32_t i = 0; i < tax.nodes_.size(); ++i) {
    if (!tax.nodes_[i].parent) roots.push_back(NodeId{i});
  }
  if (roots.empty()) throw Error(ErrorCode::kCycleDetected, "taxonomy has no root; the edges form a cycle");
  if (roots.size() > 1) {
    throw Error(ErrorCode::kMultipleRoots, "taxonomy has " + std::to_string(roots.size()) +
                                               " roots, e.g. '" + tax.nodes_[to_index(roots[0])].name +
                                               "' and '" + tax.nodes_[to_index(roots[1])].name + "'");
  }
  tax.root_ = roots.front();

  // Each node has at most one parent, so anything unreachable from the root
  // lies on (or hangs off) a cycle.
  std::size_t visited = 0;
  std::deque<NodeId> queue{tax.root_};
  auto& root_node = tax.nodes_[to_index(tax.root_)];
  root_node.depth = 1;
  root_node.path = {tax.root_};
  while (!queue.empty()) {
    const NodeId id = queue.front();
    queue.pop_front();
    ++visited;
    const auto& cur = tax.nodes_[to_index(id)];
    tax.height_ = std::max(tax.height_, cur.depth);
    for (const NodeId child : cur.children) {
      auto& c = tax.nodes_[to_index(child)];
      c.depth = cur.depth + 1;
      c.path = cur.path;
      c.path.push_back(child);
      queue.push_back(child);
    }
  }
  if (visited != tax.nodes_.size()) {
    throw Error(ErrorCode::kCycleDetected, std::to_string(tax.nodes_.size() - visited) +
                                               " node(s) are unreachable from the root through a cycle");
  }

  for (std::uint32_t i = 0; i < tax.nodes_.size(); ++i) {
    const auto& n = tax.nodes_[i];
    if (!n.children.empty()) continue;
    if (n.depth != tax.height_) {
      throw Error(ErrorCode::kRaggedLeafDepth, "leaf '" + n.name + "' is at depth " +
                                                   std::to_string(n.depth) + " but the taxonomy height is " +
                                                   std::to_string(tax.height_));
    }
    tax.leaves_.push_back(NodeId{i});
  }

  tax.weights_ = layer_weights(tax.height_);
  // With u_k = 2(K+1-k)/D and D = K(K-1), 2 * sum u_k - 1 = (4N - D) / D
  // where N is the integer sum of (K+1-k) over shared non-root layers. One
  // rounding per entry keeps the endpoints exactly -1 and 1.
  const long long denom = static_cast<long long>(tax.height_) * (tax.height_ - 1);
  tax.similarity_by_depth_.assign(static_cast<std::size_t>(tax.height_) + 1, -1.0);
  long long numer = 0;
  for (int shared = 1; shared <= tax.height_; ++shared) {
    if (shared >= 2) numer += tax.height_ + 1 - shared;
    tax.similarity_by_depth_[static_cast<std::size_t>(shared)] =
        static_cast<double>(4 * numer - denom) / static_cast<double>(denom);
  }
  return tax;
}

namespace {

void check_layer(const Taxonomy& tax, int k) {
  if (k < 1 || k > tax.height()) {
    throw Error(ErrorCode::kLayerOutOfRange, "layer " + std::to_string(k) + " outside [1, " +
                                                 std::to_string(tax.height()) + "]");
  }
}

}  // namespace

NodeId ancestor_at(const Taxonomy& tax, NodeId label, int k) {
  check_layer(tax, k);
  const auto path = tax.path(label);
  if (static_cast<std::size_t>(k) > path.size()) {
    throw Error(ErrorCode::kLayerOutOfRange, "node '" + std::string(tax.name(label)) + "' at depth " +
                                                 std::to_string(path.size()) + " has no layer-" +
                                                 std::to_string(k) + " ancestor");
  }
  return path[static_cast<std::size_t>(k - 1)];
}

int layer_similarity(const Taxonomy& tax, NodeId a, NodeId b, int k) {
  const NodeId ka = ancestor_at(tax, a, k);
  const NodeId kb = ancestor_at(tax, b, k);
  return (k != 1 && ka == kb) ? 1 : 0;
}

double hier_similarity(const Taxonomy& tax, NodeId a, NodeId b) {
  if (!tax.is_leaf(a) || !tax.is_leaf(b)) {
    throw Error(ErrorCode::kUnknownLabel, "hierarchical similarity is defined on leaf labels only");
  }
  return tax.similarity_for_shared_depth(tax.shared_depth(a, b));
}

SimilarityMatrix similarity_matrix(const Taxonomy& tax, std::span<const NodeId> labels, std::size_t cap) {
  if (labels.size() > cap) {
    throw Error(ErrorCode::kMatrixTooLarge, std::to_string(labels.size()) +
                                                " items exceed the dense similarity cap of " +
                                                std::to_string(cap));
  }
  for (const NodeId id : labels) {
    if (!tax.contains(id) || !tax.is_leaf(id)) {
      throw Error(ErrorCode::kUnknownLabel, "item label is not a leaf of the taxonomy");
    }
  }
  const std::size_t n = labels.size();
  SimilarityMatrix s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = tax.similarity_for_shared_depth(tax.shared_depth(labels[i], labels[j]));
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  return s;
}

LabeledItems parse_labels(std::string_view text, const Taxonomy& tax) {
  LabeledItems items;
  std::unordered_set<std::string> seen;
  internal::for_each_record(text, [&](std::size_t line_no, std::string_view line) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos || line.find('\t', tab + 1) != std::string_view::npos) {
      throw Error(ErrorCode::kBadFormat,
                  "line " + std::to_string(line_no) + ": expected 'item-id<TAB>leaf-label'");
    }
    std::string id(internal::trim(line.substr(0, tab)));
    const auto label_name = internal::trim(line.substr(tab + 1));
    if (id.empty() || label_name.empty()) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": empty field");
    }
    const NodeId label = tax.id_of(label_name);
    if (!tax.is_leaf(label)) {
      throw Error(ErrorCode::kUnknownLabel, "line " + std::to_string(line_no) + ": '" +
                                                std::string(label_name) + "' is not a leaf label");
    }
    if (!seen.insert(id).second) {
      throw Error(ErrorCode::kBadFormat, "line " + std::to_string(line_no) + ": duplicate item id '" + id + "'");
    }
    items.ids.push_back(std::move(id));
    items.labels.push_back(label);
  });
  return items;
}

}  // namespace shdh
