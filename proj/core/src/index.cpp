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

#include "shdh/index.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "shdh/error.hpp"

namespace shdh {

void CodeDatabase::reserve(std::size_t n) {
  ids_.reserve(n);
  bytes_.reserve(n * layout_.code_bytes());
  id_set_.reserve(n);
}

void CodeDatabase::append(std::span<const std::uint8_t> code) { append(ids_.size(), code); }

void CodeDatabase::append(std::uint64_t id, std::span<const std::uint8_t> code) {
  check_code(code, layout_);
  if (!id_set_.insert(id).second) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate item id " + std::to_string(id));
  }
  ids_.push_back(id);
  bytes_.insert(bytes_.end(), code.begin(), code.end());
}

namespace {

void check_pair(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const SegmentLayout& layout) {
  if (a.size() != layout.code_bytes() || b.size() != layout.code_bytes()) {
    throw Error(ErrorCode::kLayoutMismatch, "code sizes do not match the layout");
  }
}

void check_query(const CodeDatabase& db, std::span<const std::uint8_t> query) {
  if (db.empty()) throw Error(ErrorCode::kEmptyDatabase, "code database is empty");
  check_code(query, db.layout());
}

SearchHit make_hit(const CodeDatabase& db, std::span<const std::uint8_t> query, std::size_t pos, double distance) {
  return SearchHit{.id = db.id(pos),
                   .position = pos,
                   .distance = distance,
                   .inner_product = weighted_inner_product(query, db.code(pos), db.layout())};
}

// Orders positions by (distance, position), keeps the first n.
SearchResult rank(const CodeDatabase& db, std::span<const std::uint8_t> query, const std::vector<double>& dist,
                  std::vector<std::size_t> order, std::size_t n) {
  const auto less = [&dist](std::size_t a, std::size_t b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  };
  n = std::min(n, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n), order.end(), less);
  SearchResult out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(make_hit(db, query, order[i], dist[order[i]]));
  return out;
}

SearchResult within(const CodeDatabase& db, std::span<const std::uint8_t> query, const std::vector<double>& dist,
                    double radius) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist[i] <= radius) order.push_back(i);
  }
  const std::size_t n = order.size();
  return rank(db, query, dist, std::move(order), n);
}

std::vector<double> lut_distances(const CodeDatabase& db, std::span<const std::uint8_t> query) {
  const QueryLUT lut = build_query_lut(query, db.layout());
  const std::size_t stride = db.layout().code_bytes();
  const std::uint8_t* base = db.bytes().data();
  std::vector<double> dist(db.size());
  for (std::size_t i = 0; i < dist.size(); ++i) dist[i] = lut.distance(base + i * stride);
  return dist;
}

// One bit at a time through the logical layout; the per-chunk sum order
// matches the packed kernels so the doubles agree exactly.
double scalar_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                       const SegmentLayout& layout) {
  double acc = 0.0;
  for (const Segment& seg : layout.segments()) {
    for (int chunk_start = 0; chunk_start < seg.width; chunk_start += 8) {
      int differing = 0;
      for (int o = chunk_start; o < std::min(chunk_start + 8, seg.width); ++o) {
        const int bit = seg.first_bit + o;
        if (code_bit(a, layout, bit) != code_bit(b, layout, bit)) ++differing;
      }
      acc += seg.weight * differing;
    }
  }
  return acc;
}

// Full ranking with the scalar kernels and a stable sort, sharing nothing with
// the table path beyond the layout.
SearchResult scalar_scan(const CodeDatabase& db, std::span<const std::uint8_t> query) {
  const SegmentLayout& layout = db.layout();
  SearchResult all;
  all.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) {
    const auto code = db.code(i);
    double inner = 0.0;
    for (const Segment& seg : layout.segments()) {
      int agree = 0;
      for (int o = 0; o < seg.width; ++o) {
        agree += code_bit(query, layout, seg.first_bit + o) * code_bit(code, layout, seg.first_bit + o);
      }
      inner += seg.weight * agree;
    }
    all.push_back(SearchHit{.id = db.id(i), .position = i, .distance = scalar_distance(query, code, layout),
                            .inner_product = inner});
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const SearchHit& a, const SearchHit& b) { return a.distance < b.distance; });
  return all;
}

std::vector<std::size_t> all_positions(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  return order;
}

}  // namespace

double weighted_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                         const SegmentLayout& layout) {
  check_pair(a, b, layout);
  double acc = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) {
    const unsigned x = static_cast<unsigned>(a[c] ^ b[c]) & layout.chunk_mask(c);
    acc += layout.segment_of_chunk(c).weight * std::popcount(x);
  }
  return acc;
}

std::vector<int> segment_hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                 const SegmentLayout& layout) {
  check_pair(a, b, layout);
  std::vector<int> ham;
  ham.reserve(layout.segments().size());
  for (const Segment& seg : layout.segments()) {
    int count = 0;
    for (std::size_t c = seg.byte_offset; c < seg.byte_offset + seg.byte_count; ++c) {
      count += std::popcount(static_cast<unsigned>(a[c] ^ b[c]) & layout.chunk_mask(c));
    }
    ham.push_back(count);
  }
  return ham;
}

double weighted_inner_product(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                              const SegmentLayout& layout) {
  const std::vector<int> ham = segment_hamming(a, b, layout);
  double acc = 0.0;
  const auto segs = layout.segments();
  for (std::size_t s = 0; s < segs.size(); ++s) acc += segs[s].weight * (segs[s].width - 2 * ham[s]);
  return acc;
}

QueryLUT build_query_lut(std::span<const std::uint8_t> query, const SegmentLayout& layout) {
  check_code(query, layout);
  QueryLUT lut;
  lut.query_.assign(query.begin(), query.end());
  lut.tables_.resize(layout.code_bytes());
  for (std::size_t c = 0; c < lut.tables_.size(); ++c) {
    const double w = layout.segment_of_chunk(c).weight;
    const unsigned mask = layout.chunk_mask(c);
    for (unsigned x = 0; x < 256; ++x) lut.tables_[c][x] = w * std::popcount(x & mask);
  }
  return lut;
}

SearchResult search_topn(const CodeDatabase& db, std::span<const std::uint8_t> query, std::size_t n) {
  check_query(db, query);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "top-n requires n >= 1");
  return rank(db, query, lut_distances(db, query), all_positions(db.size()), n);
}

SearchResult search_radius(const CodeDatabase& db, std::span<const std::uint8_t> query, double radius) {
  check_query(db, query);
  if (!(radius >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  return within(db, query, lut_distances(db, query), radius);
}

SearchResult brute_force_topn(const CodeDatabase& db, std::span<const std::uint8_t> query, std::size_t n) {
  check_query(db, query);
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "top-n requires n >= 1");
  SearchResult all = scalar_scan(db, query);
  if (all.size() > n) all.resize(n);
  return all;
}

SearchResult brute_force_radius(const CodeDatabase& db, std::span<const std::uint8_t> query, double radius) {
  check_query(db, query);
  if (!(radius >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "radius must be >= 0");
  SearchResult all = scalar_scan(db, query);
  std::erase_if(all, [radius](const SearchHit& h) { return h.distance > radius; });
  return all;
}

}  // namespace shdh
