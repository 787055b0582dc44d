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

// Exact weighted-Hamming search over packed codes.
//
// The distance between two codes is D_w = sum_k u_k * ham_k, where ham_k
// counts differing bits in segment k. It ranks items in exactly the reverse
// order of the weighted inner product sum_k u_k h^k(a)^T h^k(b) =
// sum_k u_k (L_k - 2 ham_k); both numbers are reported with every hit.
//
// All distance kernels accumulate per packed byte in layout order, adding
// u_k * popcount for that byte. The lookup-table path and the scalar oracle
// therefore produce bit-identical doubles.

#ifndef SHDH_INDEX_HPP_
#define SHDH_INDEX_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "shdh/codes.hpp"

namespace shdh {

class CodeDatabase {
 public:
  explicit CodeDatabase(SegmentLayout layout) : layout_(std::move(layout)) {}

  const SegmentLayout& layout() const noexcept { return layout_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }

  void reserve(std::size_t n);
  /// Appends with id equal to the current size.
  void append(std::span<const std::uint8_t> code);
  void append(const BinaryCode& code) { append(code.bytes); }
  /// Throws kInvalidArgument on a duplicate id, kLayoutMismatch on a bad code.
  void append(std::uint64_t id, std::span<const std::uint8_t> code);

  std::uint64_t id(std::size_t position) const { return ids_.at(position); }
  std::span<const std::uint64_t> ids() const noexcept { return ids_; }
  std::span<const std::uint8_t> code(std::size_t position) const {
    return std::span<const std::uint8_t>(bytes_).subspan(position * layout_.code_bytes(), layout_.code_bytes());
  }
  /// All codes back to back, size() * layout().code_bytes() bytes.
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }

 private:
  SegmentLayout layout_;
  std::vector<std::uint64_t> ids_;
  std::vector<std::uint8_t> bytes_;
  std::unordered_set<std::uint64_t> id_set_;
};

/// D_w via per-byte popcount. Throws kLayoutMismatch on size mismatch.
double weighted_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                         const SegmentLayout& layout);

/// The weighted inner product sum_k u_k h^k(a)^T h^k(b).
double weighted_inner_product(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                              const SegmentLayout& layout);

/// Differing-bit count per segment, in layout order.
std::vector<int> segment_hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                 const SegmentLayout& layout);

/// Per-byte tables for one query: table(c)[x] is the weighted contribution of
/// XOR byte x at chunk c, so D_w(q, code) = sum_c table(c)[q[c] ^ code[c]].
class QueryLUT {
 public:
  using Table = std::array<double, 256>;

  std::size_t chunks() const noexcept { return tables_.size(); }
  const Table& table(std::size_t chunk) const { return tables_.at(chunk); }
  std::span<const std::uint8_t> query() const noexcept { return query_; }

  /// Distance from the query to `code` (not validated; callers check layout).
  double distance(const std::uint8_t* code) const noexcept {
    double acc = 0.0;
    for (std::size_t c = 0; c < tables_.size(); ++c) acc += tables_[c][query_[c] ^ code[c]];
    return acc;
  }

 private:
  friend QueryLUT build_query_lut(std::span<const std::uint8_t> query, const SegmentLayout& layout);

  std::vector<Table> tables_;
  std::vector<std::uint8_t> query_;
};

QueryLUT build_query_lut(std::span<const std::uint8_t> query, const SegmentLayout& layout);

struct SearchHit {
  std::uint64_t id = 0;
  std::size_t position = 0;  // insertion order in the database
  double distance = 0.0;
  double inner_product = 0.0;

  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

/// Hits ascending by distance, ties by insertion order.
using SearchResult = std::vector<SearchHit>;

/// The n nearest items (all of them if n exceeds the database size).
SearchResult search_topn(const CodeDatabase& db, std::span<const std::uint8_t> query, std::size_t n);

/// Every item with D_w <= radius.
SearchResult search_radius(const CodeDatabase& db, std::span<const std::uint8_t> query, double radius);

/// Scalar reference for search_topn: unpacks bit by bit, no tables.
SearchResult brute_force_topn(const CodeDatabase& db, std::span<const std::uint8_t> query, std::size_t n);

/// Scalar reference for search_radius.
SearchResult brute_force_radius(const CodeDatabase& db, std::span<const std::uint8_t> query, double radius);

}  // namespace shdh

#endif  // SHDH_INDEX_HPP_
