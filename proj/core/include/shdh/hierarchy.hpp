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

// Label taxonomies and the layer-weighted similarity defined over them.
//
// Layers are numbered from 1 (the root) to K (the leaves). Every leaf sits at
// depth K. Two leaves are similar at layer k > 1 when they share their layer-k
// ancestor; the layer weights u_k decrease with depth and sum to one over the
// non-root layers, and the hierarchical similarity 2 * sum_k u_k s^k - 1 maps
// the weighted agreement into [-1, 1].

#ifndef SHDH_HIERARCHY_HPP_
#define SHDH_HIERARCHY_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace shdh {

enum class NodeId : std::uint32_t {};

constexpr std::uint32_t to_index(NodeId id) noexcept {
  return static_cast<std::uint32_t>(id);
}

/// Importance u_k of each taxonomy layer, 1-based. u_1 is always zero.
class LayerWeights {
 public:
  int height() const noexcept { return static_cast<int>(values_.size()); }
  /// Weight of layer k, 1 <= k <= height().
  double operator[](int k) const { return values_.at(static_cast<std::size_t>(k - 1)); }
  /// All weights, index 0 holding layer 1.
  std::span<const double> values() const noexcept { return values_; }

 private:
  friend LayerWeights layer_weights(int height);
  std::vector<double> values_;
};

/// u_1 = 0 and u_k = 2(K+1-k) / (K(K-1)) for k in [2, K]. Throws
/// kHeightTooSmall when K < 2.
LayerWeights layer_weights(int height);

class Taxonomy {
 public:
  int height() const noexcept { return height_; }
  NodeId root() const noexcept { return root_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  std::string_view name(NodeId id) const { return node(id).name; }
  int depth(NodeId id) const { return node(id).depth; }
  std::optional<NodeId> parent(NodeId id) const { return node(id).parent; }
  std::span<const NodeId> children(NodeId id) const { return node(id).children; }
  bool is_leaf(NodeId id) const { return node(id).children.empty(); }
  bool contains(NodeId id) const noexcept { return to_index(id) < nodes_.size(); }

  std::optional<NodeId> find(std::string_view name) const;
  /// Like find() but throws kUnknownLabel.
  NodeId id_of(std::string_view name) const;
  /// Leaves in order of first appearance in the source text.
  const std::vector<NodeId>& leaves() const noexcept { return leaves_; }

  /// Root-to-node path; element k-1 is the ancestor at layer k.
  std::span<const NodeId> path(NodeId id) const { return node(id).path; }

  const LayerWeights& weights() const noexcept { return weights_; }

  /// 2 * sum_{k <= depth} u_k - 1 for a shared prefix of `depth` layers,
  /// correctly rounded from the exact rational value. Index 0 is unused.
  double similarity_for_shared_depth(int shared_depth) const {
    return similarity_by_depth_.at(static_cast<std::size_t>(shared_depth));
  }

  /// Number of layers on which the two nodes' paths agree (>= 1 for any pair).
  int shared_depth(NodeId a, NodeId b) const;

 private:
  struct Node {
    std::string name;
    std::optional<NodeId> parent;
    std::vector<NodeId> children;
    int depth = 0;
    std::vector<NodeId> path;
  };

  friend Taxonomy parse_taxonomy(std::string_view text);

  const Node& node(NodeId id) const;

  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeId> by_name_;
  std::vector<NodeId> leaves_;
  NodeId root_{};
  int height_ = 0;
  LayerWeights weights_;
  std::vector<double> similarity_by_depth_;
};

/// Parses a tab-separated "parent<TAB>child" edge list. Blank lines and lines
/// whose first non-space character is '#' are skipped.
Taxonomy parse_taxonomy(std::string_view text);

/// Ancestor of `label` at layer k (the label itself when depth(label) == k).
NodeId ancestor_at(const Taxonomy& tax, NodeId label, int k);

/// Indicator s^k: 1 iff both nodes share their layer-k ancestor and k != 1.
int layer_similarity(const Taxonomy& tax, NodeId a, NodeId b, int k);

/// 2 * sum_k u_k s^k - 1, in [-1, 1].
double hier_similarity(const Taxonomy& tax, NodeId a, NodeId b);

inline constexpr std::size_t kDefaultSimilarityCap = 20000;

/// Dense symmetric n x n matrix of hierarchical similarities.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;
  explicit SimilarityMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return values_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values_).subspan(i * n_, n_);
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

/// Materializes S for the given item labels. Throws kMatrixTooLarge when the
/// item count exceeds `cap`; training computes batch submatrices instead.
SimilarityMatrix similarity_matrix(const Taxonomy& tax,
                                   std::span<const NodeId> labels,
                                   std::size_t cap = kDefaultSimilarityCap);

/// Items parsed from an "item-id<TAB>leaf-label" file, in file order.
struct LabeledItems {
  std::vector<std::string> ids;
  std::vector<NodeId> labels;

  std::size_t size() const noexcept { return ids.size(); }
};

/// Every label must name a leaf of `tax`; item ids must be unique.
LabeledItems parse_labels(std::string_view text, const Taxonomy& tax);

}  // namespace shdh

#endif  // SHDH_HIERARCHY_HPP_
