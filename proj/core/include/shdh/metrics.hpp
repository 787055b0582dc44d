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

// Ranking metrics over hierarchy-aware relevances.
//
//   ACG@n  = (1/n) sum_{i<=n} s_i
//   DCG@n  = sum_{i<=n} (2^{s_i} - 1) / log2(i + 1)
//   NDCG@n = DCG@n / IdealDCG@n   (1 when IdealDCG@n is 0)
//   WR@n   = sum_{i<=n} s_i / sum_{i<=N} s_i
//
// where s_i is the relevance of the i-th ranked item to the query.

#ifndef SHDH_METRICS_HPP_
#define SHDH_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "shdh/hierarchy.hpp"
#include "shdh/index.hpp"

namespace shdh {

enum class RelevanceMode {
  /// Number of shared non-root layers, an integer in [0, K-1].
  kSharedLayers,
  /// The hierarchical similarity itself, in [-1, 1].
  kHierSimilarity,
};

std::string_view relevance_mode_name(RelevanceMode mode) noexcept;
/// "shared-layers" or "hier-similarity".
RelevanceMode parse_relevance_mode(std::string_view name);

/// Printed in report headers so outputs are self-describing.
inline constexpr std::string_view kDcgFormula = "DCG@n = sum_{i=1..n} (2^s_i - 1) / log2(i + 1)";

double relevance(const Taxonomy& tax, NodeId query_label, NodeId item_label, RelevanceMode mode);

struct RankedRelevances {
  std::string query_id;
  std::vector<double> values;  // over the full ranked database
  RelevanceMode mode = RelevanceMode::kSharedLayers;
};

double acg_at(std::span<const double> relevances, std::size_t n);
double dcg_at(std::span<const double> relevances, std::size_t n);
/// `ideal` must hold the same multiset as `relevances`, sorted descending;
/// throws kIdealMismatch otherwise.
double ndcg_at(std::span<const double> relevances, std::span<const double> ideal, std::size_t n);
/// Throws kZeroTotalRelevance when the full-list sum is zero.
double weighted_recall_at(std::span<const double> relevances, std::size_t n);

/// Relevances sorted descending.
std::vector<double> ideal_order(std::span<const double> relevances);

/// A query's label and the database positions in ranked order, optionally
/// with the ranking distance of each position.
struct QueryRanking {
  std::string query_id;
  NodeId label{};
  std::vector<std::size_t> ranking;
  std::vector<double> distances;
};

struct MetricValues {
  double acg = 0.0;
  double dcg = 0.0;
  double ndcg = 0.0;
  std::optional<double> weighted_recall;  // empty when the query was excluded
};

struct QueryMetrics {
  std::string query_id;
  std::vector<MetricValues> at;  // parallel to MetricReport::ns
};

struct MetricReport {
  RelevanceMode mode = RelevanceMode::kSharedLayers;
  std::vector<std::size_t> ns;
  std::vector<QueryMetrics> queries;
  std::vector<MetricValues> mean;  // parallel to ns
  /// Queries with zero total relevance, left out of the mean weighted recall.
  std::size_t weighted_recall_excluded = 0;

  /// "query_id,n,metric,value" rows; per-query rows followed by "mean" rows.
  std::string to_csv() const;
};

/// Ranking of the whole database from a search result, keeping its order.
QueryRanking to_ranking(std::string query_id, NodeId label, const SearchResult& hits);

/// Relevance of every ranked position to the query.
std::vector<double> ranked_relevances(const QueryRanking& query, std::span<const NodeId> db_labels,
                                      const Taxonomy& tax, RelevanceMode mode);

/// Every ranking must cover the whole database. Each n in `ns` must be in
/// [1, database size].
MetricReport eval_queries(std::span<const QueryRanking> queries, std::span<const NodeId> db_labels,
                          const Taxonomy& tax, RelevanceMode mode, std::span<const std::size_t> ns);

struct CurvePoint {
  double x = 0.0;
  double value = 0.0;  // mean weighted recall over included queries
};

/// Mean WR@n for each n.
std::vector<CurvePoint> weighted_recall_by_rank(std::span<const QueryRanking> queries,
                                                std::span<const NodeId> db_labels, const Taxonomy& tax,
                                                RelevanceMode mode, std::span<const std::size_t> ns);

/// Mean fraction of relevance mass with distance <= r, for each radius r.
/// Rankings must carry distances.
std::vector<CurvePoint> weighted_recall_by_radius(std::span<const QueryRanking> queries,
                                                  std::span<const NodeId> db_labels, const Taxonomy& tax,
                                                  RelevanceMode mode, std::span<const double> radii);

/// Two-column CSV with the given header names.
std::string curve_to_csv(std::span<const CurvePoint> curve, std::string_view x_name, std::string_view y_name);

}  // namespace shdh

#endif  // SHDH_METRICS_HPP_
